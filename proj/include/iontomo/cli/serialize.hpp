#pragma once

#include <span>
#include <string>

#include "json.hpp"

#include "iontomo/protocol.hpp"
#include "iontomo/tomography.hpp"

namespace iontomo::cli {

/// JSON text with sorted keys and every floating-point value printed with
/// 17 significant digits, so equal inputs give byte-identical files.
std::string dump_stable(const nlohmann::json& value);

nlohmann::json complex_json(Complex z);
nlohmann::json matrix_json(const Matrix& m);

nlohmann::json to_json(const CoherenceEstimate& estimate);
nlohmann::json to_json(const ReconstructionReport& report);
nlohmann::json to_json(std::span<const MonitorPoint> series);
nlohmann::json to_json(const PulseSpec& pulse);
nlohmann::json to_json(std::span<const PulseSpec> schedule);

/// Formats a double the same way dump_stable does.
std::string format_double(double value);

std::string to_csv(const CoherenceEstimate& estimate);
/// One row per cell: m,n,re,im,stderr.
std::string to_csv(const ReconstructionReport& report);
/// lambda,rho20_abs,bound
std::string to_csv(std::span<const MonitorPoint> series);
std::string to_csv(std::span<const PulseSpec> schedule);

nlohmann::json error_record(const std::exception& error);

} // namespace iontomo::cli
