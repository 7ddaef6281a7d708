#include "iontomo/hilbert.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace iontomo {

namespace {

double hermiticity_defect(const Matrix& m)
{
    return max_abs(m - m.adjoint());
}

double unitarity_defect(const Matrix& m)
{
    return max_abs(m.adjoint() * m - Matrix::Identity(m.rows(), m.cols()));
}

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what)
{
    if (a != b)
        throw Error(ErrorKind::dimension_mismatch,
                    std::string(what) + ": dimension " + std::to_string(a) + " vs " + std::to_string(b));
}

} // namespace

HilbertDims::HilbertDims(int dx, int dz) : m_dx(dx), m_dz(dz)
{
    if (dx < 2 || dz < 2)
        throw Error(ErrorKind::invalid_arguments,
                    "Fock cutoffs must be >= 2 (got dx=" + std::to_string(dx) + ", dz=" + std::to_string(dz) + ")");
}

int HilbertDims::index(Level e, int nx, int nz) const
{
    if (nx < 0 || nx >= m_dx || nz < 0 || nz >= m_dz)
        throw Error(ErrorKind::out_of_range, "Fock index outside truncation");
    return static_cast<int>(e) * (m_dx * m_dz) + nx * m_dz + nz;
}

Operator::Operator(Matrix entries, OperatorTags tags) : m_entries(std::move(entries)), m_tags(tags)
{
    if (m_entries.rows() != m_entries.cols())
        throw Error(ErrorKind::invalid_arguments, "operator matrix must be square");
    if (m_tags.hermitian && hermiticity_defect(m_entries) > tol::construction)
        throw Error(ErrorKind::precondition_violation, "operator tagged hermitian is not");
    if (m_tags.unitary && unitarity_defect(m_entries) > tol::unitarity)
        throw Error(ErrorKind::precondition_violation, "operator tagged unitary is not");
}

Operator::Operator(Matrix entries, OperatorTags tags, Unchecked) : m_entries(std::move(entries)), m_tags(tags) {}

Operator Operator::trusted(Matrix entries, OperatorTags tags)
{
    return Operator(std::move(entries), tags, Unchecked{});
}

Operator Operator::adjoint() const
{
    return Operator(m_entries.adjoint(), m_tags, Unchecked{});
}

Operator Operator::operator*(const Operator& rhs) const
{
    require_same_dim(dim(), rhs.dim(), "operator product");
    Matrix product = m_entries * rhs.m_entries;
    return Operator(std::move(product), {.hermitian = false, .unitary = m_tags.unitary && rhs.m_tags.unitary},
                    Unchecked{});
}

PureState::PureState(Vector amplitudes) : m_amplitudes(std::move(amplitudes))
{
    if (std::abs(m_amplitudes.norm() - 1.0) > tol::construction)
        throw Error(ErrorKind::precondition_violation, "state vector is not normalized");
}

DensityOperator::DensityOperator(Matrix entries) : m_entries(std::move(entries))
{
    if (m_entries.rows() != m_entries.cols())
        throw Error(ErrorKind::invalid_arguments, "density matrix must be square");
    if (hermiticity_defect(m_entries) > tol::construction)
        throw Error(ErrorKind::precondition_violation, "density matrix is not Hermitian");
    if (std::abs(m_entries.trace() - Complex(1.0)) > tol::trace)
        throw Error(ErrorKind::precondition_violation, "density matrix trace differs from 1");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m_entries, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -tol::positivity)
        throw Error(ErrorKind::precondition_violation, "density matrix has a negative eigenvalue");
}

DensityOperator::DensityOperator(const PureState& state) : m_entries(state.density()) {}

DensityOperator DensityOperator::trusted(Matrix entries)
{
    return DensityOperator(std::move(entries), Unchecked{});
}

double DensityOperator::purity() const
{
    return (m_entries * m_entries).trace().real();
}

Matrix kron(const Matrix& a, const Matrix& b)
{
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix annihilation_matrix(int cutoff)
{
    Matrix a = Matrix::Zero(cutoff, cutoff);
    for (int n = 1; n < cutoff; ++n)
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Matrix level_matrix(Level l, Level j)
{
    Matrix m = Matrix::Zero(kElectronicDim, kElectronicDim);
    m(static_cast<int>(l), static_cast<int>(j)) = 1.0;
    return m;
}

Vector fock_vector(int n, int cutoff)
{
    if (n < 0 || n >= cutoff)
        throw Error(ErrorKind::out_of_range,
                    "Fock index " + std::to_string(n) + " outside cutoff " + std::to_string(cutoff));
    Vector v = Vector::Zero(cutoff);
    v(n) = 1.0;
    return v;
}

Matrix embed_mode(Mode mode, const Matrix& single_mode, const HilbertDims& dims)
{
    require_same_dim(single_mode.rows(), dims.cutoff(mode), "mode operator");
    const Matrix modes = mode == Mode::x ? kron(single_mode, Matrix::Identity(dims.dz(), dims.dz()))
                                         : kron(Matrix::Identity(dims.dx(), dims.dx()), single_mode);
    return embed_modes(modes, dims);
}

Matrix embed_modes(const Matrix& two_mode, const HilbertDims& dims)
{
    require_same_dim(two_mode.rows(), dims.modes_dim(), "two-mode operator");
    return kron(Matrix::Identity(kElectronicDim, kElectronicDim), two_mode);
}

Matrix embed_electronic(const Matrix& electronic, const HilbertDims& dims)
{
    require_same_dim(electronic.rows(), kElectronicDim, "electronic operator");
    return kron(electronic, Matrix::Identity(dims.modes_dim(), dims.modes_dim()));
}

Vector product_state(Level e, const Vector& vx, const Vector& vz, const HilbertDims& dims)
{
    require_same_dim(vx.size(), dims.dx(), "mode x amplitudes");
    require_same_dim(vz.size(), dims.dz(), "mode z amplitudes");
    Vector out = Vector::Zero(dims.dim());
    const int offset = static_cast<int>(e) * dims.modes_dim();
    for (int nx = 0; nx < dims.dx(); ++nx)
        out.segment(offset + nx * dims.dz(), dims.dz()) = vx(nx) * vz;
    return out;
}

double max_abs(const Matrix& m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Matrix commutator(const Matrix& a, const Matrix& b)
{
    return a * b - b * a;
}

Operator annihilator(Mode mode, const HilbertDims& dims)
{
    return Operator::trusted(embed_mode(mode, annihilation_matrix(dims.cutoff(mode)), dims), {});
}

Operator electronic_op(Level l, Level j, const HilbertDims& dims)
{
    return Operator::trusted(embed_electronic(level_matrix(l, j), dims), {.hermitian = l == j, .unitary = false});
}

Operator level_projector(Level l, const HilbertDims& dims)
{
    return electronic_op(l, l, dims);
}

Operator pauli(Level l, Level j, Axis axis, const HilbertDims& dims)
{
    if (l == j)
        throw Error(ErrorKind::invalid_arguments, "Pauli operator needs two distinct levels");
    const Complex i(0.0, 1.0);
    Matrix e;
    switch (axis) {
    case Axis::x:
        e = level_matrix(l, j) + level_matrix(j, l);
        break;
    case Axis::y:
        e = i * (level_matrix(l, j) - level_matrix(j, l));
        break;
    case Axis::z:
        e = level_matrix(j, j) - level_matrix(l, l);
        break;
    }
    return Operator::trusted(embed_electronic(e, dims), {.hermitian = true, .unitary = false});
}

Operator unitary_from_generator(const Operator& generator, double theta)
{
    const Matrix& g = generator.matrix();
    if (!generator.is_hermitian() && hermiticity_defect(g) > tol::construction)
        throw Error(ErrorKind::precondition_violation, "generator is not Hermitian");
    if (theta == 0.0)
        return Operator::trusted(Matrix::Identity(g.rows(), g.cols()), {.hermitian = true, .unitary = true});

    // Symmetrize away round-off before the solver sees it, then exponentiate
    // each connected block of the coupling graph on its own. Pulse generators
    // are mostly 2x2 or phonon-number blocks, so this is far cheaper than one
    // dense solve and exact all the same.
    const Matrix h = 0.5 * (g + g.adjoint());
    const Eigen::Index n = h.rows();
    std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), Eigen::Index{0});
    auto find = [&](Eigen::Index i) {
        while (parent[i] != i)
            i = parent[i] = parent[parent[i]];
        return i;
    };
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r < c; ++r)
            if (h(r, c) != Complex(0.0))
                parent[find(r)] = find(c);

    std::map<Eigen::Index, std::vector<Eigen::Index>> blocks;
    for (Eigen::Index i = 0; i < n; ++i)
        blocks[find(i)].push_back(i);

    Matrix u = Matrix::Zero(n, n);
    for (const auto& [root, members] : blocks) {
        const auto size = static_cast<Eigen::Index>(members.size());
        Matrix sub(size, size);
        for (Eigen::Index r = 0; r < size; ++r)
            for (Eigen::Index c = 0; c < size; ++c)
                sub(r, c) = h(members[r], members[c]);
        Eigen::SelfAdjointEigenSolver<Matrix> solver(sub);
        const Eigen::VectorXd& w = solver.eigenvalues();
        Vector phases(size);
        for (Eigen::Index k = 0; k < size; ++k)
            phases(k) = std::polar(1.0, theta * w(k));
        const Matrix& v = solver.eigenvectors();
        const Matrix block = v * phases.asDiagonal() * v.adjoint();
        for (Eigen::Index r = 0; r < size; ++r)
            for (Eigen::Index c = 0; c < size; ++c)
                u(members[r], members[c]) = block(r, c);
    }
    return Operator(std::move(u), {.hermitian = false, .unitary = true});
}

Complex expectation(const DensityOperator& rho, const Operator& op)
{
    require_same_dim(rho.dim(), op.dim(), "expectation");
    // Tr(rho O) without forming the product.
    const Complex value = (rho.matrix().transpose().cwiseProduct(op.matrix())).sum();
    return op.is_hermitian() ? Complex(value.real(), 0.0) : value;
}

Complex expectation(const PureState& psi, const Operator& op)
{
    require_same_dim(psi.dim(), op.dim(), "expectation");
    const Complex value = psi.amplitudes().dot(op.matrix() * psi.amplitudes());
    return op.is_hermitian() ? Complex(value.real(), 0.0) : value;
}

PureState apply(const Operator& u, const PureState& psi)
{
    require_same_dim(u.dim(), psi.dim(), "apply");
    if (!u.is_unitary())
        throw Error(ErrorKind::precondition_violation, "apply needs a unitary-tagged operator");
    return PureState(u.matrix() * psi.amplitudes());
}

DensityOperator apply(const Operator& u, const DensityOperator& rho)
{
    require_same_dim(u.dim(), rho.dim(), "apply");
    if (!u.is_unitary())
        throw Error(ErrorKind::precondition_violation, "apply needs a unitary-tagged operator");
    Matrix out = u.matrix() * rho.matrix() * u.matrix().adjoint();
    out = 0.5 * (out + out.adjoint()).eval();
    return DensityOperator::trusted(std::move(out));
}

Matrix reduce_to_mode_x(const Matrix& composite, const HilbertDims& dims)
{
    require_same_dim(composite.rows(), dims.dim(), "partial trace");
    Matrix out = Matrix::Zero(dims.dx(), dims.dx());
    for (int e = 0; e < kElectronicDim; ++e)
        for (int r = 0; r < dims.dx(); ++r)
            for (int c = 0; c < dims.dx(); ++c)
                for (int nz = 0; nz < dims.dz(); ++nz) {
                    const auto level = static_cast<Level>(e);
                    out(r, c) += composite(dims.index(level, r, nz), dims.index(level, c, nz));
                }
    return out;
}

} // namespace iontomo
