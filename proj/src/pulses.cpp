#include "iontomo/pulses.hpp"

#include <cmath>
#include <string>

namespace iontomo {

namespace {

void require_distinct(Level l, Level j)
{
    if (l == j)
        throw Error(ErrorKind::invalid_arguments, "pulse needs two distinct levels");
}

Mode single_mode(PulseMode mode)
{
    switch (mode) {
    case PulseMode::x:
        return Mode::x;
    case PulseMode::z:
        return Mode::z;
    case PulseMode::both:
        break;
    }
    throw Error(ErrorKind::invalid_arguments, "sideband pulse must address mode x or z");
}

// e^{i phase} A |l><j| + h.c. with A acting on one mode.
Operator sideband(Mode mode, const Matrix& ladder, Level l, Level j, double phase, const HilbertDims& dims)
{
    require_distinct(l, j);
    const Matrix on_modes = mode == Mode::x ? kron(ladder, Matrix::Identity(dims.dz(), dims.dz()))
                                            : kron(Matrix::Identity(dims.dx(), dims.dx()), ladder);
    const Matrix term = kron(level_matrix(l, j), on_modes);
    const Matrix h = std::polar(1.0, phase) * term;
    return Operator(h + h.adjoint(), {.hermitian = true, .unitary = false});
}

} // namespace

void PulseSpec::validate() const
{
    if (first == second)
        throw Error(ErrorKind::invalid_arguments, "pulse levels must differ");
    if (!std::isfinite(angle))
        throw Error(ErrorKind::invalid_arguments, "pulse angle must be finite");
    if (!(phase >= 0.0 && phase < 2.0 * kPi))
        throw Error(ErrorKind::invalid_arguments, "pulse phase must lie in [0, 2pi)");
    if ((kind == PulseKind::jc || kind == PulseKind::ajc) && mode == PulseMode::both)
        throw Error(ErrorKind::invalid_arguments, "sideband pulse must address mode x or z");
}

std::string_view to_string(PulseKind kind)
{
    switch (kind) {
    case PulseKind::carrier:
        return "carrier";
    case PulseKind::jc:
        return "jc";
    case PulseKind::ajc:
        return "ajc";
    case PulseKind::erot:
        return "erot";
    case PulseKind::vrot:
        return "vrot";
    }
    return "?";
}

std::string_view to_string(PulseMode mode)
{
    switch (mode) {
    case PulseMode::x:
        return "x";
    case PulseMode::z:
        return "z";
    case PulseMode::both:
        return "both";
    }
    return "?";
}

std::string_view to_string(Level level)
{
    switch (level) {
    case Level::minus:
        return "-";
    case Level::plus:
        return "+";
    case Level::xi:
        return "xi";
    }
    return "?";
}

PulseKind parse_pulse_kind(std::string_view text)
{
    for (auto k : {PulseKind::carrier, PulseKind::jc, PulseKind::ajc, PulseKind::erot, PulseKind::vrot})
        if (to_string(k) == text)
            return k;
    throw Error(ErrorKind::invalid_arguments, "unknown pulse kind '" + std::string(text) + "'");
}

PulseMode parse_pulse_mode(std::string_view text)
{
    for (auto m : {PulseMode::x, PulseMode::z, PulseMode::both})
        if (to_string(m) == text)
            return m;
    throw Error(ErrorKind::invalid_arguments, "unknown pulse mode '" + std::string(text) + "'");
}

Level parse_level(std::string_view text)
{
    for (auto l : {Level::minus, Level::plus, Level::xi})
        if (to_string(l) == text)
            return l;
    throw Error(ErrorKind::invalid_arguments, "unknown level '" + std::string(text) + "'");
}

Operator h_carrier(Level l, Level j, double phase, const HilbertDims& dims)
{
    require_distinct(l, j);
    const Matrix h = std::polar(1.0, phase) * level_matrix(l, j);
    return Operator(embed_electronic(h + h.adjoint(), dims), {.hermitian = true, .unitary = false});
}

Operator h_jc(Mode mode, Level l, Level j, double phase, const HilbertDims& dims)
{
    return sideband(mode, annihilation_matrix(dims.cutoff(mode)).adjoint(), l, j, phase, dims);
}

Operator h_ajc(Mode mode, Level l, Level j, double phase, const HilbertDims& dims)
{
    return sideband(mode, annihilation_matrix(dims.cutoff(mode)), l, j, phase, dims);
}

Operator r_electronic(Level l, double theta, const HilbertDims& dims)
{
    return unitary_from_generator(pauli(l, Level::xi, Axis::y, dims), theta);
}

Operator l_y(const HilbertDims& dims)
{
    const Matrix ax = kron(annihilation_matrix(dims.dx()), Matrix::Identity(dims.dz(), dims.dz()));
    const Matrix az = kron(Matrix::Identity(dims.dx(), dims.dx()), annihilation_matrix(dims.dz()));
    const Complex i(0.0, 1.0);
    return Operator(i * (ax.adjoint() * az - az.adjoint() * ax), {.hermitian = true, .unitary = false});
}

Operator r_vibr(double theta, const HilbertDims& dims)
{
    return compile_pulse({.kind = PulseKind::vrot,
                          .first = Level::plus,
                          .second = Level::xi,
                          .mode = PulseMode::both,
                          .angle = theta,
                          .phase = 0.0},
                         dims);
}

Operator compile_pulse(const PulseSpec& pulse, const HilbertDims& dims)
{
    pulse.validate();
    switch (pulse.kind) {
    case PulseKind::carrier:
        return unitary_from_generator(h_carrier(pulse.first, pulse.second, pulse.phase, dims), pulse.angle);
    case PulseKind::jc:
        return unitary_from_generator(h_jc(single_mode(pulse.mode), pulse.first, pulse.second, pulse.phase, dims),
                                      pulse.angle);
    case PulseKind::ajc:
        return unitary_from_generator(h_ajc(single_mode(pulse.mode), pulse.first, pulse.second, pulse.phase, dims),
                                      pulse.angle);
    case PulseKind::erot:
        // Phase 0 gives sigma^{lj}_y, i.e. R^l(theta) for j = xi.
        return unitary_from_generator(h_carrier(pulse.first, pulse.second, pulse.phase + 0.5 * kPi, dims),
                                      pulse.angle);
    case PulseKind::vrot: {
        const Matrix sx = level_matrix(pulse.first, pulse.second) + level_matrix(pulse.second, pulse.first);
        const Operator generator(kron(sx, l_y(dims).matrix()),
                                 {.hermitian = true, .unitary = false});
        return unitary_from_generator(generator, pulse.angle);
    }
    }
    throw Error(ErrorKind::invalid_arguments, "unknown pulse kind");
}

Operator compile_schedule(std::span<const PulseSpec> schedule, const HilbertDims& dims)
{
    Matrix u = Matrix::Identity(dims.dim(), dims.dim());
    for (const auto& pulse : schedule)
        u = compile_pulse(pulse, dims).matrix() * u;
    return Operator::trusted(std::move(u), {.hermitian = false, .unitary = true});
}

} // namespace iontomo
