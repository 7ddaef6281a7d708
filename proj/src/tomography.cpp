#include "iontomo/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace iontomo {

ReconstructionReport reconstruct(const VibrationalState& phi, int nmax, const ProtocolSettings& settings,
                                 const ReconstructionOptions& options)
{
    settings.validate();
    const auto& dims = settings.dims;
    if (nmax < 0 || nmax + 1 > dims.dx())
        throw Error(ErrorKind::out_of_range,
                    "nmax=" + std::to_string(nmax) + " needs dx >= " + std::to_string(nmax + 1));
    if (settings.v_mode == VMode::compiled && nmax > dims.dx() - 2)
        throw Error(ErrorKind::out_of_range,
                    "compiled V pulses need nmax <= dx - 2 (dx=" + std::to_string(dims.dx()) + ")");

    const ProtocolEngine engine(settings);
    const DensityOperator initial = prepare_initial(phi, dims);
    const int size = nmax + 1;

    ReconstructionReport report;
    report.nmax = nmax;
    report.settings = settings;
    report.options = options;
    report.estimates = Matrix::Zero(size, size);
    report.stderrs = Eigen::MatrixXd::Zero(size, size);

    for (int m = 0; m < size; ++m) {
        for (int n = 0; n < size; ++n) {
            if (options.use_hermitian_symmetry && n < m) {
                report.estimates(m, n) = std::conj(report.estimates(n, m));
                report.stderrs(m, n) = report.stderrs(n, m);
                continue;
            }
            const auto estimate = engine.measure_element(initial, m, n);
            report.estimates(m, n) = estimate.value;
            report.stderrs(m, n) = estimate.standard_error;
            ++report.protocol_runs;
        }
    }

    if (options.project)
        report.projected = project_physical(report.estimates).matrix();

    const Matrix truth = phi.density().topLeftCorner(size, size);
    const Matrix hermitized = 0.5 * (report.estimates + report.estimates.adjoint());
    report.metrics = ReconstructionMetrics{
        .max_abs_error = max_abs(report.estimates - truth),
        .trace_distance = trace_distance(hermitized, truth),
        .hs_distance = hs_distance(report.estimates, truth),
    };
    return report;
}

DensityOperator project_physical(const Matrix& m)
{
    if (m.rows() != m.cols())
        throw Error(ErrorKind::invalid_arguments, "projection needs a square matrix");
    const Matrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    Eigen::VectorXd w = solver.eigenvalues().cwiseMax(0.0);
    const double total = w.sum();
    if (!(total > 0.0))
        throw Error(ErrorKind::degenerate_input, "matrix has no positive spectral weight to project");
    w /= total;
    const Matrix& v = solver.eigenvectors();
    Matrix rho = v * w.cast<Complex>().asDiagonal() * v.adjoint();
    rho = (0.5 * (rho + rho.adjoint())).eval();
    return DensityOperator(std::move(rho));
}

double trace_distance(const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(ErrorKind::dimension_mismatch, "trace distance of differently sized operators");
    const Matrix d = a - b;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityOperator& a, const DensityOperator& b)
{
    return trace_distance(a.matrix(), b.matrix());
}

double hs_distance(const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(ErrorKind::dimension_mismatch, "Hilbert-Schmidt distance of differently sized operators");
    return (a - b).norm();
}

std::vector<MonitorPoint> decoherence_monitor(const VibrationalState& phi, std::span<const double> lambdas,
                                              const ProtocolSettings& settings)
{
    if (lambdas.empty())
        throw Error(ErrorKind::invalid_arguments, "lambda list is empty");
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        if (!(lambdas[k] >= 0.0))
            throw Error(ErrorKind::invalid_arguments, "lambdas must be >= 0");
        if (k > 0 && lambdas[k] < lambdas[k - 1])
            throw Error(ErrorKind::invalid_arguments, "lambdas must be sorted ascending");
    }
    if (settings.dims.dx() < 3)
        throw Error(ErrorKind::out_of_range, "monitor needs Fock level 2 (dx >= 3)");

    const ProtocolEngine engine(settings);
    std::vector<MonitorPoint> series;
    series.reserve(lambdas.size());
    for (double lambda : lambdas) {
        const auto initial = prepare_initial(dephase(phi, lambda), settings.dims);
        const Complex rho20 = engine.measure_element(initial, 2, 0).value;
        const double rho00 = engine.measure_element(initial, 0, 0).value.real();
        const double rho22 = engine.measure_element(initial, 2, 2).value.real();
        series.push_back({lambda, std::abs(rho20), std::sqrt(std::max(0.0, rho00 * rho22))});
    }
    return series;
}

} // namespace iontomo
