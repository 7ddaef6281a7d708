#include "iontomo/protocol.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

namespace iontomo {

namespace {

constexpr double kQuarterPi = 0.25 * kPi;
// Laser phases giving amplitude +1 for a resonant pi-pulse that moves
// population out of the first level of the pair (kUpPhase) or into it
// (kDownPhase).
constexpr double kUpPhase = 0.5 * kPi;
constexpr double kDownPhase = 1.5 * kPi;

Matrix shift_permutation(int shift, int cutoff, VCompletion completion)
{
    Matrix p = Matrix::Zero(cutoff, cutoff);
    for (int k = 0; k < cutoff; ++k) {
        int image = k;
        if (completion == VCompletion::cyclic)
            image = (k + shift) % cutoff;
        else if (k == 0)
            image = shift;
        else if (k == shift)
            image = 0;
        p(image, k) = 1.0;
    }
    return p;
}

// Acts as `on_sector` on one electronic level and as identity elsewhere.
Operator sector_operator(Level level, const Matrix& on_sector, const HilbertDims& dims)
{
    Matrix u = Matrix::Identity(dims.dim(), dims.dim());
    const int offset = static_cast<int>(level) * dims.modes_dim();
    u.block(offset, offset, dims.modes_dim(), dims.modes_dim()) = on_sector;
    return Operator::trusted(std::move(u), {.hermitian = false, .unitary = true});
}

void check_ladder_index(int k, int cutoff, const char* name)
{
    if (k < 0 || k >= cutoff)
        throw Error(ErrorKind::out_of_range,
                    std::string(name) + " index " + std::to_string(k) + " outside cutoff " + std::to_string(cutoff));
}

std::vector<PulseSpec> ladder_schedule(int k, Level level, Mode mode, const HilbertDims& dims, const char* name)
{
    check_ladder_index(k, dims.cutoff(mode), name);
    if (k > dims.cutoff(mode) - 2)
        throw Error(ErrorKind::out_of_range, std::string(name) + " compiled ladder needs k <= cutoff - 2 (k=" +
                                                 std::to_string(k) + ", cutoff " +
                                                 std::to_string(dims.cutoff(mode)) + ")");
    const PulseMode pm = mode == Mode::x ? PulseMode::x : PulseMode::z;
    std::vector<PulseSpec> schedule;
    // |s, level> -> |s+1, xi> on the blue sideband, |s, xi> -> |s+1, level>
    // on the red one. Pulse area pi/2 over the sqrt(s+1) coupling.
    for (int s = 0; s < k; ++s) {
        const double area = 0.5 * kPi / std::sqrt(static_cast<double>(s + 1));
        if (s % 2 == 0)
            schedule.push_back({PulseKind::ajc, level, Level::xi, pm, area, kUpPhase});
        else
            schedule.push_back({PulseKind::jc, level, Level::xi, pm, area, kDownPhase});
    }
    if (k % 2 == 1)
        schedule.push_back({PulseKind::carrier, level, Level::xi, pm, 0.5 * kPi, kDownPhase});
    return schedule;
}

Matrix electronic_reduced(const DensityOperator& rho, const HilbertDims& dims)
{
    const int block = dims.modes_dim();
    Matrix out(kElectronicDim, kElectronicDim);
    for (int e = 0; e < kElectronicDim; ++e)
        for (int f = 0; f < kElectronicDim; ++f)
            out(e, f) = rho.matrix().block(e * block, f * block, block, block).trace();
    return out;
}

struct ObservableSample {
    double mean;
    double variance;
};

// Draws `shots` outcomes from {+1 with p_plus, -1 with p_minus, 0 otherwise}.
ObservableSample sample_pauli(double p_plus, double p_minus, std::uint64_t shots, std::array<std::uint64_t, 6> key)
{
    std::seed_seq seq(key.begin(), key.end());
    std::mt19937_64 rng(seq);
    std::uint64_t n_plus = 0;
    std::uint64_t n_minus = 0;
    for (std::uint64_t s = 0; s < shots; ++s) {
        // 53-bit uniform from the raw engine output; portable across libraries.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < p_plus)
            ++n_plus;
        else if (u < p_plus + p_minus)
            ++n_minus;
    }
    const double count = static_cast<double>(shots);
    const double mean = (static_cast<double>(n_plus) - static_cast<double>(n_minus)) / count;
    const double second = (static_cast<double>(n_plus) + static_cast<double>(n_minus)) / count;
    double variance = 0.0;
    if (shots > 1)
        variance = std::max(0.0, (second - mean * mean) * count / (count - 1.0));
    return {mean, variance};
}

double clamp_probability(double p)
{
    return std::clamp(p, 0.0, 1.0);
}

} // namespace

void ProtocolSettings::validate() const
{
    if (dims.dx() != dims.dz())
        throw Error(ErrorKind::invalid_arguments, "protocol requires dx == dz (got dx=" + std::to_string(dims.dx()) +
                                                      ", dz=" + std::to_string(dims.dz()) + ")");
    if (shots && *shots < 1)
        throw Error(ErrorKind::invalid_arguments, "shots must be >= 1");
}

DensityOperator prepare_initial(const VibrationalState& phi, const HilbertDims& dims)
{
    if (phi.dim() != dims.dx())
        throw Error(ErrorKind::dimension_mismatch, "vibrational state dim " + std::to_string(phi.dim()) +
                                                       " differs from dx=" + std::to_string(dims.dx()));
    if (phi.leaky())
        throw Error(ErrorKind::truncation_leakage, "vibrational state exceeds its truncation tolerance");
    Matrix rho = Matrix::Zero(dims.dim(), dims.dim());
    const Matrix vib = phi.density();
    for (int r = 0; r < dims.dx(); ++r)
        for (int c = 0; c < dims.dx(); ++c)
            rho(dims.index(Level::minus, r, 0), dims.index(Level::minus, c, 0)) = vib(r, c);
    return DensityOperator::trusted(std::move(rho));
}

PureState prepare_initial_pure(const VibrationalState& phi, const HilbertDims& dims)
{
    if (phi.dim() != dims.dx())
        throw Error(ErrorKind::dimension_mismatch, "vibrational state dim differs from dx");
    if (phi.leaky())
        throw Error(ErrorKind::truncation_leakage, "vibrational state exceeds its truncation tolerance");
    return PureState(product_state(Level::minus, phi.amplitudes(), fock_vector(0, dims.dz()), dims));
}

Vector target_state(const VibrationalState& phi, int m, int n, const HilbertDims& dims)
{
    if (phi.dim() != dims.dx() || dims.dx() != dims.dz())
        throw Error(ErrorKind::dimension_mismatch, "target state needs dx == dz == phi.dim");
    const Vector& amp = phi.amplitudes();
    return (product_state(Level::minus, amp, fock_vector(m, dims.dz()), dims) +
            product_state(Level::plus, fock_vector(n, dims.dx()), amp, dims)) /
           std::sqrt(2.0);
}

std::vector<PulseSpec> u00_schedule(bool compat_printed_final_pulse)
{
    const PulseSpec erot_minus{PulseKind::erot, Level::minus, Level::xi, PulseMode::both, kQuarterPi, 0.0};
    const PulseSpec erot_plus{PulseKind::erot, Level::plus, Level::xi, PulseMode::both, -kQuarterPi, 0.0};
    const PulseSpec swap{PulseKind::vrot, Level::plus, Level::xi, PulseMode::both, 0.5 * kPi, 0.0};
    // R^+(-pi/4) takes (|+> + |xi>)/sqrt2 back to |+>.
    const PulseSpec restore = compat_printed_final_pulse ? erot_minus : erot_plus;
    return {erot_minus, erot_plus, swap, restore};
}

Operator u00(const HilbertDims& dims, bool compat_printed_final_pulse)
{
    if (dims.dx() != dims.dz())
        throw Error(ErrorKind::invalid_arguments, "U00 requires equal mode cutoffs");
    const auto schedule = u00_schedule(compat_printed_final_pulse);
    return compile_schedule(schedule, dims);
}

Operator v_plus_ideal(int n, const HilbertDims& dims, VCompletion completion)
{
    check_ladder_index(n, dims.dx(), "V+");
    const Matrix shift = kron(shift_permutation(n, dims.dx(), completion), Matrix::Identity(dims.dz(), dims.dz()));
    return sector_operator(Level::plus, shift, dims);
}

Operator v_minus_ideal(int m, const HilbertDims& dims, VCompletion completion)
{
    check_ladder_index(m, dims.dz(), "V-");
    const Matrix shift = kron(Matrix::Identity(dims.dx(), dims.dx()), shift_permutation(m, dims.dz(), completion));
    return sector_operator(Level::minus, shift, dims);
}

std::vector<PulseSpec> v_plus_schedule(int n, const HilbertDims& dims)
{
    return ladder_schedule(n, Level::plus, Mode::x, dims, "V+");
}

std::vector<PulseSpec> v_minus_schedule(int m, const HilbertDims& dims)
{
    return ladder_schedule(m, Level::minus, Mode::z, dims, "V-");
}

Operator v_plus_compiled(int n, const HilbertDims& dims)
{
    const auto schedule = v_plus_schedule(n, dims);
    return compile_schedule(schedule, dims);
}

Operator v_minus_compiled(int m, const HilbertDims& dims)
{
    const auto schedule = v_minus_schedule(m, dims);
    return compile_schedule(schedule, dims);
}

Matrix v_plus_domain(const HilbertDims& dims)
{
    Matrix p = level_projector(Level::minus, dims).matrix();
    for (int nz = 0; nz < dims.dz(); ++nz) {
        const int k = dims.index(Level::plus, 0, nz);
        p(k, k) = 1.0;
    }
    return p;
}

Matrix v_minus_domain(const HilbertDims& dims)
{
    Matrix p = level_projector(Level::plus, dims).matrix();
    for (int nx = 0; nx < dims.dx(); ++nx) {
        const int k = dims.index(Level::minus, nx, 0);
        p(k, k) = 1.0;
    }
    return p;
}

std::vector<PulseSpec> u_mn_schedule(int m, int n, const ProtocolSettings& settings)
{
    settings.validate();
    auto schedule = u00_schedule(settings.compat_printed_final_pulse);
    for (const auto& p : v_minus_schedule(m, settings.dims))
        schedule.push_back(p);
    for (const auto& p : v_plus_schedule(n, settings.dims))
        schedule.push_back(p);
    return schedule;
}

Operator u_mn(int m, int n, const ProtocolSettings& settings)
{
    return ProtocolEngine(settings).u_mn(m, n);
}

Complex coherence_expectation(const DensityOperator& rho_mn, const HilbertDims& dims)
{
    const Complex sx = expectation(rho_mn, pauli(Level::minus, Level::plus, Axis::x, dims));
    const Complex sy = expectation(rho_mn, pauli(Level::minus, Level::plus, Axis::y, dims));
    // sigma_x + i sigma_y = 2|+><-| would give <n|rho|m>; the minus sign
    // selects <m|rho|n>.
    return Complex(sx.real(), -sy.real());
}

CoherenceEstimate coherence_sampled(const DensityOperator& rho_mn, const HilbertDims& dims, std::uint64_t shots,
                                    std::uint64_t seed, int m, int n)
{
    if (shots < 1)
        throw Error(ErrorKind::invalid_arguments, "shots must be >= 1");
    if (rho_mn.dim() != dims.dim())
        throw Error(ErrorKind::dimension_mismatch, "transformed state does not match dims");
    const Matrix el = electronic_reduced(rho_mn, dims);
    const double r = 1.0 / std::sqrt(2.0);
    const Complex i(0.0, 1.0);
    auto probability = [&](Complex a_minus, Complex a_plus) {
        Vector v = Vector::Zero(kElectronicDim);
        v(0) = a_minus;
        v(1) = a_plus;
        return clamp_probability(v.dot(el * v).real());
    };
    // sigma_x eigenvectors (|-> +- |+>)/sqrt2; sigma_y eigenvectors (|-> -+ i|+>)/sqrt2.
    const double px_plus = probability(r, r);
    const double px_minus = probability(r, -r);
    const double py_plus = probability(r, -i * r);
    const double py_minus = probability(r, i * r);

    const auto seed_lo = static_cast<std::uint32_t>(seed);
    const auto seed_hi = static_cast<std::uint32_t>(seed >> 32);
    const auto um = static_cast<std::uint64_t>(m);
    const auto un = static_cast<std::uint64_t>(n);
    const auto x = sample_pauli(px_plus, px_minus, shots, {seed_lo, seed_hi, um, un, 0, 0x5eed});
    const auto y = sample_pauli(py_plus, py_minus, shots, {seed_lo, seed_hi, um, un, 1, 0x5eed});
    return {.value = Complex(x.mean, -y.mean),
            .standard_error = std::sqrt((x.variance + y.variance) / static_cast<double>(shots)),
            .shots_used = shots,
            .m = m,
            .n = n};
}

ProtocolEngine::ProtocolEngine(ProtocolSettings settings) : m_settings(std::move(settings))
{
    m_settings.validate();
}

const Operator& ProtocolEngine::u00() const
{
    std::lock_guard lock(m_mutex);
    if (!m_u00)
        m_u00 = std::make_unique<Operator>(iontomo::u00(m_settings.dims, m_settings.compat_printed_final_pulse));
    return *m_u00;
}

const Operator& ProtocolEngine::v_plus(int n) const
{
    std::lock_guard lock(m_mutex);
    auto it = m_v_plus.find(n);
    if (it == m_v_plus.end()) {
        Operator v = m_settings.v_mode == VMode::ideal ? v_plus_ideal(n, m_settings.dims, m_settings.completion)
                                                       : v_plus_compiled(n, m_settings.dims);
        it = m_v_plus.emplace(n, std::move(v)).first;
    }
    return it->second;
}

const Operator& ProtocolEngine::v_minus(int m) const
{
    std::lock_guard lock(m_mutex);
    auto it = m_v_minus.find(m);
    if (it == m_v_minus.end()) {
        Operator v = m_settings.v_mode == VMode::ideal ? v_minus_ideal(m, m_settings.dims, m_settings.completion)
                                                       : v_minus_compiled(m, m_settings.dims);
        it = m_v_minus.emplace(m, std::move(v)).first;
    }
    return it->second;
}

void ProtocolEngine::check_indices(int m, int n) const
{
    const auto& dims = m_settings.dims;
    check_ladder_index(m, dims.dz(), "m");
    check_ladder_index(n, dims.dx(), "n");
}

Operator ProtocolEngine::u_mn(int m, int n) const
{
    check_indices(m, n);
    return v_plus(n) * (v_minus(m) * u00());
}

CoherenceEstimate ProtocolEngine::measure_element(const VibrationalState& phi, int m, int n) const
{
    return measure_element(prepare_initial(phi, m_settings.dims), m, n);
}

CoherenceEstimate ProtocolEngine::measure_element(const DensityOperator& initial, int m, int n) const
{
    const auto rho_mn = apply(u_mn(m, n), initial);
    if (m_settings.shots)
        return coherence_sampled(rho_mn, m_settings.dims, *m_settings.shots, m_settings.seed, m, n);
    return {.value = coherence_expectation(rho_mn, m_settings.dims), .standard_error = 0.0, .shots_used = 0, .m = m,
            .n = n};
}

CoherenceEstimate measure_element(const VibrationalState& phi, int m, int n, const ProtocolSettings& settings)
{
    return ProtocolEngine(settings).measure_element(phi, m, n);
}

} // namespace iontomo
