#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "iontomo/hilbert.hpp"

namespace iontomo {

enum class PulseKind { carrier, jc, ajc, erot, vrot };
enum class PulseMode { x, z, both };

/// One primitive laser pulse. The unitary is exp(i * angle * H) with H the
/// interaction Hamiltonian of `kind` (ladder sqrt factors live in H, so
/// angle is the bare area gamma*t).
struct PulseSpec {
    PulseKind kind = PulseKind::carrier;
    Level first = Level::plus;
    Level second = Level::xi;
    PulseMode mode = PulseMode::x;
    double angle = 0.0;
    double phase = 0.0;

    /// Throws invalid_arguments when the record breaks its invariants.
    void validate() const;

    bool operator==(const PulseSpec&) const = default;
};

std::string_view to_string(PulseKind kind);
std::string_view to_string(PulseMode mode);
std::string_view to_string(Level level);
PulseKind parse_pulse_kind(std::string_view text);
PulseMode parse_pulse_mode(std::string_view text);
Level parse_level(std::string_view text);

/// e^{i phase}|l><j| + h.c.
Operator h_carrier(Level l, Level j, double phase, const HilbertDims& dims);

/// Red sideband: e^{i phase} a^dag |l><j| + h.c.
Operator h_jc(Mode mode, Level l, Level j, double phase, const HilbertDims& dims);

/// Blue sideband: e^{i phase} a |l><j| + h.c.
Operator h_ajc(Mode mode, Level l, Level j, double phase, const HilbertDims& dims);

/// R^l(theta) = exp(i theta sigma^{l xi}_y).
Operator r_electronic(Level l, double theta, const HilbertDims& dims);

/// Two-mode generator L_y = i(a_x^dag a_z - a_z^dag a_x) on the dx*dz mode
/// space. exp(i (pi/2) L_y) maps |n>_x|0>_z to |0>_x|n>_z with amplitude +1.
Operator l_y(const HilbertDims& dims);

/// R^vibr(theta) = exp(i theta L_y sigma^{+xi}_x) on the composite space.
Operator r_vibr(double theta, const HilbertDims& dims);

Operator compile_pulse(const PulseSpec& pulse, const HilbertDims& dims);

/// Product of the pulse unitaries in time order (first element acts first).
Operator compile_schedule(std::span<const PulseSpec> schedule, const HilbertDims& dims);

} // namespace iontomo
