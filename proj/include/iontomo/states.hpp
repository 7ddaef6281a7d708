#pragma once

#include <span>
#include <variant>

#include "iontomo/hilbert.hpp"

namespace iontomo {

/// Largest probability mass a constructor may discard at the Fock cutoff.
inline constexpr double kDefaultTailTol = 1e-5;

enum class Parity { even, odd };

/// Single-mode vibrational state on a truncated Fock ladder |0>..|dim-1>.
///
/// Constructors renormalize on the truncation; tail_mass() records the
/// probability mass that was cut off before renormalization.
class VibrationalState {
public:
    static VibrationalState pure(Vector amplitudes, double tail_mass = 0.0, double tail_tol = kDefaultTailTol);
    static VibrationalState mixed(Matrix rho, double tail_mass = 0.0, double tail_tol = kDefaultTailTol);

    int dim() const noexcept { return m_dim; }
    bool is_pure() const noexcept { return std::holds_alternative<Vector>(m_data); }

    /// Throws precondition_violation for mixed states.
    const Vector& amplitudes() const;
    Matrix density() const;
    Complex element(int m, int n) const;

    double tail_mass() const noexcept { return m_tail_mass; }
    double tail_tol() const noexcept { return m_tail_tol; }
    bool leaky() const noexcept { return m_tail_mass > m_tail_tol; }

private:
    VibrationalState(std::variant<Vector, Matrix> data, int dim, double tail_mass, double tail_tol);

    std::variant<Vector, Matrix> m_data;
    int m_dim;
    double m_tail_mass;
    double m_tail_tol;
};

VibrationalState fock(int n, int dim);
VibrationalState coherent(Complex alpha, int dim, double tail_tol = kDefaultTailTol);

/// Squeezed vacuum S(r e^{i phi})|0>.
VibrationalState squeezed(double r, double phi, int dim, double tail_tol = kDefaultTailTol);

/// N(|alpha> + |-alpha>) for even parity, N(|alpha> - |-alpha>) for odd.
VibrationalState cat(Complex alpha, Parity parity, int dim, double tail_tol = kDefaultTailTol);

VibrationalState thermal(double nbar, int dim, double tail_tol = kDefaultTailTol);

/// User-supplied amplitudes; must be normalized within norm_tol and are
/// renormalized exactly.
VibrationalState raw(std::span<const Complex> amplitudes, double norm_tol = 1e-6);

/// rho_mn -> rho_mn * exp(-lambda (m - n)^2).
VibrationalState dephase(const VibrationalState& state, double lambda);

} // namespace iontomo
