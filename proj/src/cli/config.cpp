#include "iontomo/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace iontomo::cli {

using nlohmann::json;

namespace {

std::string join(const std::string& parent, const std::string& key)
{
    return parent.empty() ? key : parent + "." + key;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path)
{
    for (const auto& [key, value] : obj.items())
        if (!allowed.contains(key))
            throw ConfigError(join(path, key), "unknown field '" + join(path, key) + "'");
}

const json& require(const json& obj, const std::string& key, const std::string& path)
{
    if (!obj.contains(key))
        throw ConfigError(join(path, key), "missing field '" + join(path, key) + "'");
    return obj.at(key);
}

int as_int(const json& v, const std::string& field)
{
    if (!v.is_number_integer())
        throw ConfigError(field, "field '" + field + "' must be an integer");
    return v.get<int>();
}

std::uint64_t as_uint(const json& v, const std::string& field)
{
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ConfigError(field, "field '" + field + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
}

double as_double(const json& v, const std::string& field)
{
    if (!v.is_number())
        throw ConfigError(field, "field '" + field + "' must be a number");
    return v.get<double>();
}

Complex as_complex(const json& v, const std::string& field)
{
    if (v.is_number())
        return {v.get<double>(), 0.0};
    if (v.is_object()) {
        reject_unknown(v, {"re", "im"}, field);
        const double re = v.contains("re") ? as_double(v.at("re"), field + ".re") : 0.0;
        const double im = v.contains("im") ? as_double(v.at("im"), field + ".im") : 0.0;
        return {re, im};
    }
    throw ConfigError(field, "field '" + field + "' must be a number or {\"re\", \"im\"}");
}

const std::set<std::string>& state_fields(const std::string& kind)
{
    static const std::map<std::string, std::set<std::string>> fields = {
        {"fock", {"n"}},       {"coherent", {"alpha"}}, {"squeezed", {"r", "phi"}},
        {"cat", {"alpha", "parity"}}, {"thermal", {"nbar"}},   {"raw", {"amplitudes"}},
    };
    const auto it = fields.find(kind);
    if (it == fields.end())
        throw ConfigError("state.kind", "unknown state kind '" + kind + "'");
    return it->second;
}

void check_state_schema(const json& state, int dx)
{
    if (!state.is_object())
        throw ConfigError("state", "field 'state' must be an object");
    const json& kind_json = require(state, "kind", "state");
    if (!kind_json.is_string())
        throw ConfigError("state.kind", "field 'state.kind' must be a string");
    const auto kind = kind_json.get<std::string>();
    std::set<std::string> allowed = state_fields(kind);
    for (const auto& f : allowed)
        require(state, f, "state");
    allowed.insert({"kind", "dephase", "tail_tol"});
    reject_unknown(state, allowed, "state");

    if (kind == "fock")
        as_int(state.at("n"), "state.n");
    else if (kind == "coherent")
        as_complex(state.at("alpha"), "state.alpha");
    else if (kind == "squeezed") {
        as_double(state.at("r"), "state.r");
        as_double(state.at("phi"), "state.phi");
    } else if (kind == "cat") {
        as_complex(state.at("alpha"), "state.alpha");
        const auto& parity = state.at("parity");
        if (!parity.is_string() || (parity != "even" && parity != "odd"))
            throw ConfigError("state.parity", "field 'state.parity' must be \"even\" or \"odd\"");
    } else if (kind == "thermal")
        as_double(state.at("nbar"), "state.nbar");
    else if (kind == "raw") {
        const auto& amps = state.at("amplitudes");
        if (!amps.is_array())
            throw ConfigError("state.amplitudes", "field 'state.amplitudes' must be an array");
        if (static_cast<int>(amps.size()) != dx)
            throw ConfigError("state.amplitudes", "raw amplitude list must have length dx=" + std::to_string(dx));
        for (std::size_t k = 0; k < amps.size(); ++k)
            as_complex(amps[k], "state.amplitudes[" + std::to_string(k) + "]");
    }
    if (state.contains("dephase") && !(as_double(state.at("dephase"), "state.dephase") >= 0.0))
        throw ConfigError("state.dephase", "field 'state.dephase' must be >= 0");
    if (state.contains("tail_tol") && !(as_double(state.at("tail_tol"), "state.tail_tol") > 0.0))
        throw ConfigError("state.tail_tol", "field 'state.tail_tol' must be > 0");
}

VMode parse_v_mode(const json& v)
{
    if (v == "ideal")
        return VMode::ideal;
    if (v == "compiled")
        return VMode::compiled;
    throw ConfigError("v_mode", "field 'v_mode' must be \"ideal\" or \"compiled\"");
}

} // namespace

std::string_view to_string(VMode mode)
{
    return mode == VMode::ideal ? "ideal" : "compiled";
}

std::string_view to_string(OutputFormat format)
{
    return format == OutputFormat::json ? "json" : "csv";
}

OutputFormat parse_format(std::string_view text)
{
    if (text == "json")
        return OutputFormat::json;
    if (text == "csv")
        return OutputFormat::csv;
    throw ConfigError("output.format", "format must be \"json\" or \"csv\"");
}

RunConfig parse_config(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + upto, '\n'));
        throw ConfigError("", std::string("config is not valid JSON: ") + e.what(), line);
    }
    if (!doc.is_object())
        throw ConfigError("", "config must be a JSON object");
    reject_unknown(doc, {"dims", "state", "nmax", "v_mode", "shots", "seed", "output"}, "");

    RunConfig cfg;
    if (doc.contains("dims")) {
        const auto& dims = doc.at("dims");
        if (!dims.is_object())
            throw ConfigError("dims", "field 'dims' must be an object");
        reject_unknown(dims, {"dx", "dz"}, "dims");
        cfg.dx = as_int(require(dims, "dx", "dims"), "dims.dx");
        cfg.dz = as_int(require(dims, "dz", "dims"), "dims.dz");
    }
    if (cfg.dx < 2 || cfg.dz < 2)
        throw ConfigError("dims", "Fock cutoffs must be >= 2");
    if (doc.contains("state"))
        cfg.state = doc.at("state");
    check_state_schema(cfg.state, cfg.dx);
    if (doc.contains("nmax"))
        cfg.nmax = as_int(doc.at("nmax"), "nmax");
    if (cfg.nmax < 0)
        throw ConfigError("nmax", "field 'nmax' must be >= 0");
    if (doc.contains("v_mode"))
        cfg.v_mode = parse_v_mode(doc.at("v_mode"));
    if (doc.contains("shots") && !doc.at("shots").is_null()) {
        cfg.shots = as_uint(doc.at("shots"), "shots");
        if (*cfg.shots < 1)
            throw ConfigError("shots", "field 'shots' must be >= 1 (omit it for exact mode)");
    }
    if (doc.contains("seed"))
        cfg.seed = as_uint(doc.at("seed"), "seed");
    if (doc.contains("output")) {
        const auto& out = doc.at("output");
        if (!out.is_object())
            throw ConfigError("output", "field 'output' must be an object");
        reject_unknown(out, {"path", "format"}, "output");
        if (out.contains("path")) {
            if (!out.at("path").is_string())
                throw ConfigError("output.path", "field 'output.path' must be a string");
            cfg.output_path = out.at("path").get<std::string>();
        }
        if (out.contains("format")) {
            if (!out.at("format").is_string())
                throw ConfigError("output.format", "field 'output.format' must be a string");
            cfg.format = parse_format(out.at("format").get<std::string>());
        }
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("", "cannot read config file '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

ProtocolSettings RunConfig::settings(bool compat_printed_final_pulse) const
{
    ProtocolSettings s{.dims = HilbertDims(dx, dz),
                       .v_mode = v_mode,
                       .shots = shots,
                       .seed = seed,
                       .completion = VCompletion::cyclic,
                       .compat_printed_final_pulse = compat_printed_final_pulse};
    s.validate();
    return s;
}

VibrationalState RunConfig::build_state() const
{
    const auto kind = state.at("kind").get<std::string>();
    const double tail_tol = state.contains("tail_tol") ? state.at("tail_tol").get<double>() : kDefaultTailTol;
    auto base = [&]() -> VibrationalState {
        if (kind == "fock")
            return fock(state.at("n").get<int>(), dx);
        if (kind == "coherent")
            return coherent(as_complex(state.at("alpha"), "state.alpha"), dx, tail_tol);
        if (kind == "squeezed")
            return squeezed(state.at("r").get<double>(), state.at("phi").get<double>(), dx, tail_tol);
        if (kind == "cat")
            return cat(as_complex(state.at("alpha"), "state.alpha"),
                       state.at("parity") == "even" ? Parity::even : Parity::odd, dx, tail_tol);
        if (kind == "thermal")
            return thermal(state.at("nbar").get<double>(), dx, tail_tol);
        std::vector<Complex> amps;
        for (const auto& a : state.at("amplitudes"))
            amps.push_back(as_complex(a, "state.amplitudes"));
        return raw(amps);
    }();
    if (state.contains("dephase"))
        return dephase(base, state.at("dephase").get<double>());
    return base;
}

json RunConfig::echo() const
{
    json out = {
        {"dims", {{"dx", dx}, {"dz", dz}}},
        {"state", state},
        {"nmax", nmax},
        {"v_mode", std::string(to_string(v_mode))},
        {"seed", seed},
    };
    out["shots"] = shots ? json(*shots) : json(nullptr);
    return out;
}

} // namespace iontomo::cli
