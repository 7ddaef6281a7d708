#include "iontomo/states.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace iontomo {

namespace {

constexpr std::size_t kMaxSeriesTerms = 1'000'000;

// Amplitudes of a pure family far enough past the cutoff that the remainder
// is negligible. `next(n, c_n)` returns c_{n+1}.
template <class Next>
std::vector<Complex> series(Complex c0, int dim, double scale, Next next)
{
    std::vector<Complex> c{c0};
    double total = std::norm(c0);
    for (std::size_t n = 0;; ++n) {
        if (n + 1 >= kMaxSeriesTerms)
            throw Error(ErrorKind::invalid_arguments, "state parameters too large to expand");
        c.push_back(next(n, c.back()));
        total += std::norm(c.back());
        const bool past_bulk = static_cast<double>(n) > scale && static_cast<int>(n) >= dim;
        if (past_bulk && std::norm(c.back()) < 1e-40 * total && std::norm(c[c.size() - 2]) < 1e-40 * total)
            break;
    }
    return c;
}

struct Truncation {
    Vector amplitudes;
    double tail_mass;
    int required_dim;
};

Truncation truncate(const std::vector<Complex>& c, int dim, double tail_tol)
{
    double total = 0.0;
    for (const auto& v : c)
        total += std::norm(v);
    if (total == 0.0)
        throw Error(ErrorKind::degenerate_input, "state vector vanishes");

    // Suffix sums give the tail for every candidate cutoff without cancellation.
    std::vector<double> tail(c.size() + 1, 0.0);
    for (std::size_t n = c.size(); n-- > 0;)
        tail[n] = tail[n + 1] + std::norm(c[n]) / total;

    int required = 1;
    while (static_cast<std::size_t>(required) < c.size() && tail[required] > tail_tol)
        ++required;

    const double tail_mass = static_cast<std::size_t>(dim) < tail.size() ? tail[dim] : 0.0;
    Vector amps = Vector::Zero(dim);
    for (int n = 0; n < dim && static_cast<std::size_t>(n) < c.size(); ++n)
        amps(n) = c[n];
    const double norm = amps.norm();
    if (norm == 0.0)
        throw Error(ErrorKind::degenerate_input, "state has no support below the cutoff");
    amps /= norm;
    return {std::move(amps), tail_mass, std::max(required, 2)};
}

void check_leakage(const Truncation& t, int dim, double tail_tol)
{
    if (t.tail_mass > tail_tol)
        throw Error(ErrorKind::truncation_leakage,
                    "truncation at dim " + std::to_string(dim) + " discards mass " + std::to_string(t.tail_mass) +
                        " > tail_tol; required dim >= " + std::to_string(t.required_dim));
}

void check_dim(int dim)
{
    if (dim < 2)
        throw Error(ErrorKind::invalid_arguments, "Fock cutoff must be >= 2");
}

std::vector<Complex> coherent_series(Complex alpha, int dim)
{
    const double a2 = std::norm(alpha);
    return series(Complex(std::exp(-0.5 * a2)), dim, a2 + 10.0 * std::sqrt(a2) + 10.0,
                  [alpha](std::size_t n, Complex cn) { return cn * alpha / std::sqrt(static_cast<double>(n + 1)); });
}

} // namespace

VibrationalState::VibrationalState(std::variant<Vector, Matrix> data, int dim, double tail_mass, double tail_tol)
    : m_data(std::move(data)), m_dim(dim), m_tail_mass(tail_mass), m_tail_tol(tail_tol)
{
}

VibrationalState VibrationalState::pure(Vector amplitudes, double tail_mass, double tail_tol)
{
    const int dim = static_cast<int>(amplitudes.size());
    check_dim(dim);
    if (std::abs(amplitudes.norm() - 1.0) > tol::trace)
        throw Error(ErrorKind::precondition_violation, "vibrational amplitudes are not normalized");
    return VibrationalState(std::move(amplitudes), dim, tail_mass, tail_tol);
}

VibrationalState VibrationalState::mixed(Matrix rho, double tail_mass, double tail_tol)
{
    const int dim = static_cast<int>(rho.rows());
    check_dim(dim);
    // Runs the density-operator checks.
    DensityOperator checked(rho);
    return VibrationalState(checked.matrix(), dim, tail_mass, tail_tol);
}

const Vector& VibrationalState::amplitudes() const
{
    if (const auto* v = std::get_if<Vector>(&m_data))
        return *v;
    throw Error(ErrorKind::precondition_violation, "mixed state has no amplitude vector");
}

Matrix VibrationalState::density() const
{
    if (const auto* v = std::get_if<Vector>(&m_data))
        return *v * v->adjoint();
    return std::get<Matrix>(m_data);
}

Complex VibrationalState::element(int m, int n) const
{
    if (m < 0 || n < 0 || m >= m_dim || n >= m_dim)
        throw Error(ErrorKind::out_of_range, "matrix element outside truncation");
    if (const auto* v = std::get_if<Vector>(&m_data))
        return (*v)(m)*std::conj((*v)(n));
    return std::get<Matrix>(m_data)(m, n);
}

VibrationalState fock(int n, int dim)
{
    check_dim(dim);
    return VibrationalState::pure(fock_vector(n, dim));
}

VibrationalState coherent(Complex alpha, int dim, double tail_tol)
{
    check_dim(dim);
    auto t = truncate(coherent_series(alpha, dim), dim, tail_tol);
    check_leakage(t, dim, tail_tol);
    return VibrationalState::pure(std::move(t.amplitudes), t.tail_mass, tail_tol);
}

VibrationalState squeezed(double r, double phi, int dim, double tail_tol)
{
    check_dim(dim);
    if (!std::isfinite(r) || !std::isfinite(phi))
        throw Error(ErrorKind::invalid_arguments, "squeezing parameters must be finite");
    // Even amplitudes obey c_{2k+2} = -e^{i phi} tanh(r) sqrt((2k+1)/(2k+2)) c_{2k};
    // odd amplitudes vanish.
    const Complex ratio = -std::polar(std::tanh(r), phi);
    const double t = std::abs(std::tanh(r));
    const double scale = t < 1.0 ? 20.0 / (1.0 - t) : 1e6;
    const auto even = series(Complex(1.0 / std::sqrt(std::cosh(r))), (dim + 1) / 2, scale,
                             [ratio](std::size_t k, Complex ck) {
                                 return ck * ratio * std::sqrt((2.0 * k + 1.0) / (2.0 * k + 2.0));
                             });
    std::vector<Complex> c(2 * even.size(), Complex(0.0));
    for (std::size_t k = 0; k < even.size(); ++k)
        c[2 * k] = even[k];
    auto tr = truncate(c, dim, tail_tol);
    check_leakage(tr, dim, tail_tol);
    return VibrationalState::pure(std::move(tr.amplitudes), tr.tail_mass, tail_tol);
}

VibrationalState cat(Complex alpha, Parity parity, int dim, double tail_tol)
{
    check_dim(dim);
    if (alpha == Complex(0.0) && parity == Parity::odd)
        throw Error(ErrorKind::degenerate_input, "odd cat with alpha = 0 is the zero vector");
    auto c = coherent_series(alpha, dim);
    // <n|-alpha> = (-1)^n <n|alpha>
    for (std::size_t n = 0; n < c.size(); ++n) {
        const bool keep = (n % 2 == 0) == (parity == Parity::even);
        c[n] = keep ? 2.0 * c[n] : Complex(0.0);
    }
    auto t = truncate(c, dim, tail_tol);
    check_leakage(t, dim, tail_tol);
    return VibrationalState::pure(std::move(t.amplitudes), t.tail_mass, tail_tol);
}

VibrationalState thermal(double nbar, int dim, double tail_tol)
{
    check_dim(dim);
    if (!(nbar >= 0.0) || !std::isfinite(nbar))
        throw Error(ErrorKind::invalid_arguments, "mean phonon number must be finite and >= 0");
    const double q = nbar / (1.0 + nbar);
    const double tail_mass = std::pow(q, dim);
    if (tail_mass > tail_tol) {
        const int required = static_cast<int>(std::ceil(std::log(tail_tol) / std::log(q)));
        throw Error(ErrorKind::truncation_leakage,
                    "thermal truncation at dim " + std::to_string(dim) + " discards mass " +
                        std::to_string(tail_mass) + " > tail_tol; required dim >= " + std::to_string(required));
    }
    Matrix rho = Matrix::Zero(dim, dim);
    double p = 1.0;
    for (int n = 0; n < dim; ++n, p *= q)
        rho(n, n) = p;
    rho /= rho.trace().real();
    return VibrationalState::mixed(std::move(rho), tail_mass, tail_tol);
}

VibrationalState raw(std::span<const Complex> amplitudes, double norm_tol)
{
    Vector v(static_cast<Eigen::Index>(amplitudes.size()));
    for (std::size_t n = 0; n < amplitudes.size(); ++n)
        v(static_cast<Eigen::Index>(n)) = amplitudes[n];
    const double norm = v.norm();
    if (norm == 0.0)
        throw Error(ErrorKind::degenerate_input, "raw amplitude list is the zero vector");
    if (std::abs(norm - 1.0) > norm_tol)
        throw Error(ErrorKind::precondition_violation,
                    "raw amplitudes have norm " + std::to_string(norm) + ", expected 1");
    return VibrationalState::pure(v / norm);
}

VibrationalState dephase(const VibrationalState& state, double lambda)
{
    if (!(lambda >= 0.0))
        throw Error(ErrorKind::invalid_arguments, "dephasing strength must be >= 0");
    Matrix rho = state.density();
    for (int m = 0; m < state.dim(); ++m)
        for (int n = 0; n < state.dim(); ++n)
            if (m != n)
                rho(m, n) *= std::exp(-lambda * static_cast<double>((m - n) * (m - n)));
    return VibrationalState::mixed(std::move(rho), state.tail_mass(), state.tail_tol());
}

} // namespace iontomo
