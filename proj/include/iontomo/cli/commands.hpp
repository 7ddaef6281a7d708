#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "iontomo/cli/config.hpp"

namespace iontomo::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitError = 2;
inline constexpr int kExitUsage = 64;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CommandOptions {
    std::optional<std::string> out_path;
    std::optional<OutputFormat> format;
    bool use_hermitian_symmetry = false;
    bool compat_printed_eq6 = false;
};

int cmd_reconstruct(const RunConfig& config, const CommandOptions& options, std::ostream& out);
int cmd_coherence(const RunConfig& config, int m, int n, const CommandOptions& options, std::ostream& out);
int cmd_monitor(const RunConfig& config, const std::vector<double>& lambdas, const CommandOptions& options,
                std::ostream& out);
/// Runs the invariant checks and prints a pass/fail table; exit 0 iff all pass.
int cmd_validate(const RunConfig& config, const CommandOptions& options, std::ostream& out);
/// Compiled pulse list of U_mn.
int cmd_schedule(const RunConfig& config, int m, int n, const CommandOptions& options, std::ostream& out);

/// Full command-line entry point. Failures print a JSON error record to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace iontomo::cli
