#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "iontomo/cli/commands.hpp"
#include "iontomo/cli/serialize.hpp"

using namespace iontomo;
using namespace iontomo::cli;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "iontomo");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch()
{
    const fs::path dir = fs::temp_directory_path() / "iontomo_cli_test";
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const std::string& name, const std::string& text)
{
    const fs::path path = scratch() / name;
    std::ofstream(path) << text;
    return path;
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

const char* kCoherent = R"({
  "dims": {"dx": 8, "dz": 8},
  "state": {"kind": "coherent", "alpha": {"re": 0.8, "im": 0.0}},
  "nmax": 2,
  "v_mode": "ideal",
  "seed": 3
})";

} // namespace

TEST_CASE("config parsing")
{
    SUBCASE("defaults")
    {
        const auto cfg = parse_config("{}");
        CHECK(cfg.dx == 8);
        CHECK(cfg.nmax == 2);
        CHECK(cfg.v_mode == VMode::ideal);
        CHECK_FALSE(cfg.shots);
        CHECK(cfg.build_state().element(0, 0) == Complex(1.0));
    }

    SUBCASE("every state kind builds")
    {
        for (const char* state : {
                 R"({"kind": "fock", "n": 2})",
                 R"({"kind": "coherent", "alpha": 0.5})",
                 R"({"kind": "squeezed", "r": 0.3, "phi": 0.0, "tail_tol": 1e-3})",
                 R"({"kind": "cat", "alpha": 0.7, "parity": "odd", "tail_tol": 1e-3})",
                 R"({"kind": "thermal", "nbar": 0.2, "tail_tol": 1e-3})",
                 R"({"kind": "coherent", "alpha": 0.5, "dephase": 0.2})",
             }) {
            const auto cfg = parse_config(std::string(R"({"state": )") + state + "}");
            CHECK_NOTHROW(cfg.build_state());
        }
        const auto cfg = parse_config(
            R"({"dims": {"dx": 3, "dz": 3}, "state": {"kind": "raw", "amplitudes": [0.6, {"im": 0.8}, 0]}})");
        CHECK(std::abs(cfg.build_state().element(1, 0) - Complex(0.0, 0.48)) < 1e-15);
    }

    SUBCASE("unknown fields are named")
    {
        try {
            parse_config(R"({"state": {"kind": "fock", "n": 1, "alpah": 2}})");
            FAIL("expected config error");
        } catch (const ConfigError& e) {
            CHECK(e.field() == "state.alpah");
        }
    }

    SUBCASE("syntax errors report the line")
    {
        try {
            parse_config("{\n  \"nmax\": 2,\n  \"seed\": ,\n}");
            FAIL("expected config error");
        } catch (const ConfigError& e) {
            REQUIRE(e.line());
            CHECK(*e.line() == 3);
        }
    }

    SUBCASE("type and range errors")
    {
        CHECK_THROWS_AS(parse_config(R"({"nmax": "two"})"), ConfigError);
        CHECK_THROWS_AS(parse_config(R"({"shots": 0})"), ConfigError);
        CHECK_THROWS_AS(parse_config(R"({"v_mode": "fast"})"), ConfigError);
        CHECK_THROWS_AS(parse_config(R"({"state": {"kind": "raw", "amplitudes": [1, 0]}})"), ConfigError);
        CHECK_THROWS_AS(parse_config(R"({"state": {"kind": "cat", "alpha": 1, "parity": "both"}})"), ConfigError);
        CHECK_THROWS_AS(parse_config(R"({"dims": {"dx": 1, "dz": 1}})"), ConfigError);
    }
}

TEST_CASE("stable serialization")
{
    CHECK(format_double(1.0) == "1.0");
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(std::nan("")) == "null");
    const std::string text = dump_stable(json{{"b", 1}, {"a", {1.5, 2}}});
    CHECK(text == "{\n  \"a\": [\n    1.5,\n    2\n  ],\n  \"b\": 1\n}\n");
    CHECK(json::parse(text) == json{{"b", 1}, {"a", {1.5, 2}}});
}

TEST_CASE("reconstruct command")
{
    const auto cfg = write_config("coherent.json", kCoherent);

    SUBCASE("json output carries estimates, settings and the config echo")
    {
        const auto r = invoke({"reconstruct", "--config", cfg.string()});
        REQUIRE(r.code == kExitOk);
        const auto doc = json::parse(r.out);
        CHECK(doc.at("nmax") == 2);
        CHECK(doc.at("estimates").size() == 3);
        CHECK(doc.at("settings").at("v_mode") == "ideal");
        CHECK(doc.at("config").at("state").at("kind") == "coherent");
        CHECK(doc.at("estimates")[0][0].at("re").get<double>() == doctest::Approx(0.527292).epsilon(1e-5));
    }

    SUBCASE("reruns are byte-identical")
    {
        const auto a = invoke({"reconstruct", "--config", cfg.string()});
        const auto b = invoke({"reconstruct", "--config", cfg.string()});
        CHECK(a.out == b.out);
    }

    SUBCASE("csv output and file destination")
    {
        const fs::path dest = scratch() / "report.csv";
        const auto r = invoke({"reconstruct", "--config", cfg.string(), "--format", "csv", "--out", dest.string()});
        REQUIRE(r.code == kExitOk);
        const std::string text = slurp(dest);
        CHECK(text.rfind("m,n,re,im,stderr\n", 0) == 0);
        CHECK(std::count(text.begin(), text.end(), '\n') == 10);
    }
}

TEST_CASE("coherence command")
{
    const auto cfg = write_config("coherent_c.json", kCoherent);
    const auto r = invoke({"coherence", "--config", cfg.string(), "--m", "1", "--n", "0"});
    REQUIRE(r.code == kExitOk);
    const auto doc = json::parse(r.out);
    CHECK(doc.at("value").at("re").get<double>() == doctest::Approx(0.421834).epsilon(1e-5));
    CHECK(doc.at("shots") == 0);

    const auto csv = invoke({"coherence", "--config", cfg.string(), "--m", "1", "--n", "0", "--format", "csv"});
    CHECK(csv.out.rfind("m,n,re,im,stderr,shots\n", 0) == 0);

    const auto bad = invoke({"coherence", "--config", cfg.string(), "--m", "9", "--n", "0"});
    CHECK(bad.code == kExitError);
    CHECK(json::parse(bad.err).at("error").contains("kind"));

    CHECK(invoke({"coherence", "--config", cfg.string(), "--m", "1"}).code == kExitUsage);
}

TEST_CASE("monitor command")
{
    const auto cfg = write_config("coherent_m.json", kCoherent);
    const auto r = invoke({"monitor", "--config", cfg.string(), "--lambdas", "0,0.1,0.5"});
    REQUIRE(r.code == kExitOk);
    const auto doc = json::parse(r.out);
    const auto& series = doc.at("series");
    REQUIRE(series.size() == 3);
    for (const auto& p : series)
        CHECK(p.at("rho20_abs").get<double>() <= p.at("bound").get<double>() + 1e-12);

    CHECK(invoke({"monitor", "--config", cfg.string(), "--lambdas", ""}).code == kExitUsage);
    CHECK(invoke({"monitor", "--config", cfg.string(), "--lambdas", "0.5,0.1"}).code == kExitError);
}

TEST_CASE("validate command")
{
    const auto cfg = write_config("small.json", R"({"dims": {"dx": 6, "dz": 6}})");

    SUBCASE("default settings pass")
    {
        const auto r = invoke({"validate", "--config", cfg.string()});
        CHECK(r.code == kExitOk);
        CHECK(r.out.find("FAIL") == std::string::npos);
    }

    SUBCASE("the printed final pulse fails the end-to-end checks")
    {
        const auto r = invoke({"validate", "--config", cfg.string(), "--compat-printed-eq6", "--format", "json"});
        CHECK(r.code == kExitCheckFailed);
        const auto doc = json::parse(r.out);
        bool any_failed = false;
        for (const auto& check : doc.at("checks"))
            any_failed = any_failed || !check.at("pass").get<bool>();
        CHECK(any_failed);
    }

    SUBCASE("unequal cutoffs are rejected")
    {
        const auto uneven = write_config("uneven.json", R"({"dims": {"dx": 6, "dz": 5}})");
        const auto r = invoke({"validate", "--config", uneven.string()});
        CHECK(r.code == kExitError);
    }
}

TEST_CASE("schedule command")
{
    const auto cfg = write_config("compiled.json", R"({"dims": {"dx": 6, "dz": 6}, "v_mode": "compiled"})");
    const auto r = invoke({"schedule", "--config", cfg.string(), "--m", "1", "--n", "2"});
    REQUIRE(r.code == kExitOk);
    const auto doc = json::parse(r.out);
    CHECK(doc.at("pulses").size() >= 4);
    CHECK(doc.at("pulses")[0].at("kind") == "erot");
}

TEST_CASE("error records")
{
    const auto missing = invoke({"reconstruct", "--config", (scratch() / "nope.json").string()});
    CHECK(missing.code == kExitError);
    const auto broken = write_config("broken.json", "{\n  \"nmax\": 2,\n  \"state\": {\"kind\": \"fock\", \"n\": 1,}\n}");
    const auto r = invoke({"reconstruct", "--config", broken.string()});
    CHECK(r.code == kExitError);
    const auto rec = json::parse(r.err).at("error");
    CHECK(rec.at("kind") == "config");
    CHECK(rec.at("line") == 3);

    CHECK(invoke({}).code == kExitUsage);
    CHECK(invoke({"teleport"}).code == kExitUsage);
}

TEST_CASE("installed binary smoke test")
{
    const char* bin = std::getenv("IONTOMO_BIN");
    if (!bin) {
        MESSAGE("IONTOMO_BIN not set; skipping");
        return;
    }
    const auto cfg = write_config("smoke.json", kCoherent);
    const fs::path dest = scratch() / "smoke_out.json";
    const std::string cmd =
        std::string(bin) + " coherence --config " + cfg.string() + " --m 0 --n 0 --out " + dest.string();
    CHECK(std::system(cmd.c_str()) == 0);
    const auto doc = json::parse(slurp(dest));
    CHECK(doc.at("value").at("re").get<double>() == doctest::Approx(0.527292).epsilon(1e-5));
}
