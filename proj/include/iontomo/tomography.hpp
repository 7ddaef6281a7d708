#pragma once

#include <optional>
#include <span>
#include <vector>

#include "iontomo/protocol.hpp"

namespace iontomo {

struct ReconstructionMetrics {
    double max_abs_error = 0.0;
    double trace_distance = 0.0;
    double hs_distance = 0.0;
};

struct ReconstructionOptions {
    // Fill (n, m) from conj((m, n)) instead of running it.
    bool use_hermitian_symmetry = false;
    bool project = true;
};

struct ReconstructionReport {
    int nmax = 0;
    Matrix estimates;        // (nmax+1) x (nmax+1)
    Eigen::MatrixXd stderrs; // same shape; zero in exact mode
    std::optional<Matrix> projected;
    std::optional<ReconstructionMetrics> metrics;
    ProtocolSettings settings;
    ReconstructionOptions options;
    std::uint64_t protocol_runs = 0;
};

ReconstructionReport reconstruct(const VibrationalState& phi, int nmax, const ProtocolSettings& settings,
                                 const ReconstructionOptions& options = {});

/// Hermitize, clip negative eigenvalues, renormalize the trace.
DensityOperator project_physical(const Matrix& m);

/// (1/2) sum |eig(A - B)| for Hermitian A, B.
double trace_distance(const Matrix& a, const Matrix& b);
double trace_distance(const DensityOperator& a, const DensityOperator& b);
double hs_distance(const Matrix& a, const Matrix& b);

struct MonitorPoint {
    double lambda = 0.0;
    double rho20_abs = 0.0;
    double bound = 0.0; // sqrt(rho00 * rho22)
};

/// Dephases phi by each lambda and measures only rho_20, rho_00, rho_22.
std::vector<MonitorPoint> decoherence_monitor(const VibrationalState& phi, std::span<const double> lambdas,
                                              const ProtocolSettings& settings);

} // namespace iontomo
