#include "iontomo/cli/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "iontomo/cli/config.hpp"

namespace iontomo::cli {

using nlohmann::json;

namespace {

void write(std::ostringstream& out, const json& value, int depth)
{
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
    switch (value.type()) {
    case json::value_t::object: {
        if (value.empty()) {
            out << "{}";
            return;
        }
        out << "{\n";
        bool first = true;
        // nlohmann's default object type is an ordered std::map.
        for (const auto& [key, item] : value.items()) {
            if (!first)
                out << ",\n";
            first = false;
            out << pad << json(key).dump() << ": ";
            write(out, item, depth + 1);
        }
        out << "\n" << close_pad << "}";
        return;
    }
    case json::value_t::array: {
        if (value.empty()) {
            out << "[]";
            return;
        }
        out << "[\n";
        for (std::size_t k = 0; k < value.size(); ++k) {
            if (k > 0)
                out << ",\n";
            out << pad;
            write(out, value[k], depth + 1);
        }
        out << "\n" << close_pad << "]";
        return;
    }
    case json::value_t::number_float:
        out << format_double(value.get<double>());
        return;
    default:
        out << value.dump();
        return;
    }
}

std::string csv_line(std::initializer_list<std::string> fields)
{
    std::string line;
    bool first = true;
    for (const auto& f : fields) {
        if (!first)
            line += ',';
        first = false;
        line += f;
    }
    return line + '\n';
}

} // namespace

std::string format_double(double value)
{
    if (!std::isfinite(value))
        return "null";
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    std::string text(buffer);
    // Keep floats recognisable as floats after a round trip.
    if (text.find_first_of(".eEn") == std::string::npos)
        text += ".0";
    return text;
}

std::string dump_stable(const json& value)
{
    std::ostringstream out;
    write(out, value, 0);
    out << '\n';
    return out.str();
}

json complex_json(Complex z)
{
    return {{"re", z.real()}, {"im", z.imag()}};
}

json matrix_json(const Matrix& m)
{
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(complex_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json to_json(const CoherenceEstimate& estimate)
{
    return {
        {"m", estimate.m},
        {"n", estimate.n},
        {"value", complex_json(estimate.value)},
        {"stderr", estimate.standard_error},
        {"shots", estimate.shots_used},
    };
}

json to_json(const ReconstructionReport& report)
{
    json stderrs = json::array();
    for (Eigen::Index r = 0; r < report.stderrs.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < report.stderrs.cols(); ++c)
            row.push_back(report.stderrs(r, c));
        stderrs.push_back(std::move(row));
    }
    const auto& s = report.settings;
    json out = {
        {"nmax", report.nmax},
        {"estimates", matrix_json(report.estimates)},
        {"stderr", std::move(stderrs)},
        {"protocol_runs", report.protocol_runs},
        {"settings",
         {
             {"dims", {{"dx", s.dims.dx()}, {"dz", s.dims.dz()}}},
             {"v_mode", std::string(to_string(s.v_mode))},
             {"shots", s.shots ? json(*s.shots) : json(nullptr)},
             {"seed", s.seed},
             {"compat_printed_eq6", s.compat_printed_final_pulse},
             {"use_hermitian_symmetry", report.options.use_hermitian_symmetry},
         }},
    };
    out["projected"] = report.projected ? matrix_json(*report.projected) : json(nullptr);
    if (report.metrics)
        out["metrics"] = {
            {"max_abs_error", report.metrics->max_abs_error},
            {"trace_distance", report.metrics->trace_distance},
            {"hs_distance", report.metrics->hs_distance},
        };
    else
        out["metrics"] = nullptr;
    return out;
}

json to_json(std::span<const MonitorPoint> series)
{
    json rows = json::array();
    for (const auto& p : series)
        rows.push_back({{"lambda", p.lambda}, {"rho20_abs", p.rho20_abs}, {"bound", p.bound}});
    return rows;
}

json to_json(const PulseSpec& pulse)
{
    return {
        {"kind", std::string(to_string(pulse.kind))},
        {"levels", {std::string(to_string(pulse.first)), std::string(to_string(pulse.second))}},
        {"mode", std::string(to_string(pulse.mode))},
        {"angle", pulse.angle},
        {"phase", pulse.phase},
    };
}

json to_json(std::span<const PulseSpec> schedule)
{
    json rows = json::array();
    for (const auto& p : schedule)
        rows.push_back(to_json(p));
    return rows;
}

std::string to_csv(const CoherenceEstimate& e)
{
    return csv_line({"m", "n", "re", "im", "stderr", "shots"}) +
           csv_line({std::to_string(e.m), std::to_string(e.n), format_double(e.value.real()),
                     format_double(e.value.imag()), format_double(e.standard_error), std::to_string(e.shots_used)});
}

std::string to_csv(const ReconstructionReport& report)
{
    std::string out = csv_line({"m", "n", "re", "im", "stderr"});
    for (Eigen::Index m = 0; m < report.estimates.rows(); ++m)
        for (Eigen::Index n = 0; n < report.estimates.cols(); ++n)
            out += csv_line({std::to_string(m), std::to_string(n), format_double(report.estimates(m, n).real()),
                             format_double(report.estimates(m, n).imag()), format_double(report.stderrs(m, n))});
    return out;
}

std::string to_csv(std::span<const MonitorPoint> series)
{
    std::string out = csv_line({"lambda", "rho20_abs", "bound"});
    for (const auto& p : series)
        out += csv_line({format_double(p.lambda), format_double(p.rho20_abs), format_double(p.bound)});
    return out;
}

std::string to_csv(std::span<const PulseSpec> schedule)
{
    std::string out = csv_line({"kind", "level_1", "level_2", "mode", "angle", "phase"});
    for (const auto& p : schedule)
        out += csv_line({std::string(to_string(p.kind)), std::string(to_string(p.first)),
                         std::string(to_string(p.second)), std::string(to_string(p.mode)), format_double(p.angle),
                         format_double(p.phase)});
    return out;
}

json error_record(const std::exception& error)
{
    json record = {{"message", error.what()}};
    if (const auto* config = dynamic_cast<const ConfigError*>(&error)) {
        record["kind"] = "config";
        if (!config->field().empty())
            record["field"] = config->field();
        if (config->line())
            record["line"] = *config->line();
    } else if (const auto* lib = dynamic_cast<const Error*>(&error)) {
        record["kind"] = std::string(to_string(lib->kind()));
    } else {
        record["kind"] = "internal";
    }
    return {{"error", std::move(record)}};
}

} // namespace iontomo::cli
