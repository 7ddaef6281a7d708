#pragma once

#include <complex>

#include <Eigen/Dense>

#include "iontomo/error.hpp"

namespace iontomo {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

namespace tol {
inline constexpr double construction = 1e-12;
inline constexpr double unitarity = 1e-10;
inline constexpr double trace = 1e-10;
inline constexpr double positivity = 1e-10;
} // namespace tol

// Electronic levels in canonical order: |-> = 0, |+> = 1, |xi> = 2.
enum class Level : int { minus = 0, plus = 1, xi = 2 };
enum class Mode { x, z };
enum class Axis { x, y, z };

inline constexpr int kElectronicDim = 3;

/// Truncated composite space: three electronic levels times two Fock ladders.
///
/// Flat index of |e>|nx>_x|nz>_z is e*(dx*dz) + nx*dz + nz, i.e. the
/// electronic factor is outermost and mode z innermost. All operators and
/// serialized output use this order.
class HilbertDims {
public:
    HilbertDims(int dx, int dz);

    int dx() const noexcept { return m_dx; }
    int dz() const noexcept { return m_dz; }
    int cutoff(Mode mode) const noexcept { return mode == Mode::x ? m_dx : m_dz; }
    int modes_dim() const noexcept { return m_dx * m_dz; }
    int dim() const noexcept { return kElectronicDim * m_dx * m_dz; }

    int index(Level e, int nx, int nz) const;

    bool operator==(const HilbertDims&) const = default;

private:
    int m_dx;
    int m_dz;
};

struct OperatorTags {
    bool hermitian = false;
    bool unitary = false;
};

/// Dense square operator. Tags are verified on construction against the
/// construction/unitarity tolerances, so a tagged Operator is always honest.
class Operator {
public:
    explicit Operator(Matrix entries, OperatorTags tags = {});

    // Skips tag verification; for results whose tags follow algebraically
    // (products of unitaries, adjoints).
    static Operator trusted(Matrix entries, OperatorTags tags);

    const Matrix& matrix() const noexcept { return m_entries; }
    Eigen::Index dim() const noexcept { return m_entries.rows(); }
    bool is_hermitian() const noexcept { return m_tags.hermitian; }
    bool is_unitary() const noexcept { return m_tags.unitary; }

    Operator adjoint() const;
    Operator operator*(const Operator& rhs) const;

private:
    struct Unchecked {};
    Operator(Matrix entries, OperatorTags tags, Unchecked);

    Matrix m_entries;
    OperatorTags m_tags;
};

class PureState {
public:
    explicit PureState(Vector amplitudes);

    const Vector& amplitudes() const noexcept { return m_amplitudes; }
    Eigen::Index dim() const noexcept { return m_amplitudes.size(); }
    Matrix density() const { return m_amplitudes * m_amplitudes.adjoint(); }

private:
    Vector m_amplitudes;
};

class DensityOperator {
public:
    /// Validates hermiticity, unit trace and positivity.
    explicit DensityOperator(Matrix entries);
    explicit DensityOperator(const PureState& state);

    static DensityOperator trusted(Matrix entries);

    const Matrix& matrix() const noexcept { return m_entries; }
    Eigen::Index dim() const noexcept { return m_entries.rows(); }
    Complex operator()(Eigen::Index r, Eigen::Index c) const { return m_entries(r, c); }
    double purity() const;

private:
    struct Unchecked {};
    DensityOperator(Matrix entries, Unchecked) : m_entries(std::move(entries)) {}

    Matrix m_entries;
};

// Raw building blocks.
Matrix kron(const Matrix& a, const Matrix& b);
Matrix annihilation_matrix(int cutoff);
Matrix level_matrix(Level l, Level j);
Vector fock_vector(int n, int cutoff);

// Embeddings into the composite space.
Matrix embed_mode(Mode mode, const Matrix& single_mode, const HilbertDims& dims);
Matrix embed_modes(const Matrix& two_mode, const HilbertDims& dims);
Matrix embed_electronic(const Matrix& electronic, const HilbertDims& dims);

/// |e> (x) |vx>_x (x) |vz>_z in canonical order.
Vector product_state(Level e, const Vector& vx, const Vector& vz, const HilbertDims& dims);

double max_abs(const Matrix& m);
Matrix commutator(const Matrix& a, const Matrix& b);

/// Truncated annihilation operator of one mode, identity elsewhere.
Operator annihilator(Mode mode, const HilbertDims& dims);

/// |l><j| on the electronic factor, identity on both modes.
Operator electronic_op(Level l, Level j, const HilbertDims& dims);

/// Projector onto one electronic level (identity on the modes).
Operator level_projector(Level l, const HilbertDims& dims);

/// sigma^{lj}_x = |l><j| + |j><l|, sigma^{lj}_y = i(|l><j| - |j><l|),
/// sigma^{lj}_z = |j><j| - |l><l|. Throws invalid_arguments when l == j.
Operator pauli(Level l, Level j, Axis axis, const HilbertDims& dims);

/// exp(i*theta*G) through the Hermitian eigendecomposition of G.
Operator unitary_from_generator(const Operator& generator, double theta);

Complex expectation(const DensityOperator& rho, const Operator& op);
Complex expectation(const PureState& psi, const Operator& op);

PureState apply(const Operator& u, const PureState& psi);
DensityOperator apply(const Operator& u, const DensityOperator& rho);

/// Reduced state of mode x (traces out the electronic factor and mode z).
Matrix reduce_to_mode_x(const Matrix& composite, const HilbertDims& dims);

} // namespace iontomo
