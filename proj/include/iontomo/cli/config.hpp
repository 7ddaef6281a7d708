#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "iontomo/protocol.hpp"
#include "iontomo/states.hpp"

namespace iontomo::cli {

enum class OutputFormat { json, csv };

/// Config failure tied to a field path ("state.alpha") and, for syntax
/// errors, a line number.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what, std::optional<int> line = std::nullopt)
        : Error(ErrorKind::config, what), m_field(std::move(field)), m_line(line)
    {
    }

    const std::string& field() const noexcept { return m_field; }
    std::optional<int> line() const noexcept { return m_line; }

private:
    std::string m_field;
    std::optional<int> m_line;
};

/// Parsed run configuration.
///
/// {
///   "dims": {"dx": 12, "dz": 12},
///   "state": {"kind": "coherent", "alpha": {"re": 0.8, "im": 0.0}, "dephase": 0.3},
///   "nmax": 5, "v_mode": "ideal", "shots": 100000, "seed": 7,
///   "output": {"path": "report.json", "format": "json"}
/// }
///
/// State kinds and their fields: fock {n}; coherent {alpha}; squeezed {r, phi};
/// cat {alpha, parity}; thermal {nbar}; raw {amplitudes}. Every kind accepts
/// optional "dephase" and "tail_tol". Complex numbers are either a plain
/// number or {"re", "im"}.
struct RunConfig {
    int dx = 8;
    int dz = 8;
    nlohmann::json state = {{"kind", "fock"}, {"n", 0}};
    int nmax = 2;
    VMode v_mode = VMode::ideal;
    std::optional<std::uint64_t> shots;
    std::uint64_t seed = 0;
    std::optional<std::string> output_path;
    OutputFormat format = OutputFormat::json;

    ProtocolSettings settings(bool compat_printed_final_pulse = false) const;
    VibrationalState build_state() const;
    nlohmann::json echo() const;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

std::string_view to_string(VMode mode);
std::string_view to_string(OutputFormat format);
OutputFormat parse_format(std::string_view text);

} // namespace iontomo::cli
