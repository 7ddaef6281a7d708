#include "iontomo/cli/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "iontomo/cli/serialize.hpp"
#include "iontomo/pulses.hpp"
#include "iontomo/tomography.hpp"

namespace iontomo::cli {

using nlohmann::json;

namespace {

OutputFormat resolve_format(const RunConfig& config, const CommandOptions& options)
{
    return options.format.value_or(config.format);
}

void emit(const std::string& text, const RunConfig& config, const CommandOptions& options, std::ostream& out)
{
    const auto path = options.out_path ? options.out_path : config.output_path;
    if (!path) {
        out << text;
        return;
    }
    std::ofstream file(*path, std::ios::binary | std::ios::trunc);
    if (!file)
        throw Error(ErrorKind::invalid_arguments, "cannot open output file '" + *path + "'");
    file << text;
    if (!file)
        throw Error(ErrorKind::invalid_arguments, "failed writing output file '" + *path + "'");
}

struct Check {
    std::string name;
    double value;
    double tolerance;
    bool pass;
};

Check below(std::string name, double value, double tolerance)
{
    return {std::move(name), value, tolerance, value <= tolerance};
}

double unitarity_defect(const Operator& u)
{
    return max_abs(u.matrix().adjoint() * u.matrix() - Matrix::Identity(u.dim(), u.dim()));
}

std::vector<Check> run_checks(const RunConfig& config, bool compat)
{
    const auto settings = config.settings(compat);
    const auto& dims = settings.dims;
    const int d = dims.dx();
    const int kmax = std::min(2, d - 2);

    std::vector<Check> checks;

    {
        const HilbertDims modes(d, d);
        const auto swap = unitary_from_generator(l_y(modes), 0.5 * kPi);
        double worst = 0.0;
        for (int n = 0; n <= d - 2; ++n) {
            Vector in = Vector::Zero(modes.modes_dim());
            Vector target = Vector::Zero(modes.modes_dim());
            in(n * d) = 1.0;
            target(n) = 1.0;
            worst = std::max(worst, (swap.matrix() * in - target).norm());
        }
        checks.push_back(below("swap_identity", worst, 1e-10));
    }

    std::vector<VibrationalState> family{fock(0, d), fock(1, d)};
    const auto configured = config.build_state();
    if (configured.is_pure())
        family.push_back(configured);

    ProtocolSettings ideal = settings;
    ideal.v_mode = VMode::ideal;
    ProtocolSettings compiled = settings;
    compiled.v_mode = VMode::compiled;
    const ProtocolEngine ideal_engine(ideal);
    const ProtocolEngine compiled_engine(compiled);

    double eq3_ideal = 0.0;
    double eq3_compiled = 0.0;
    double xi_population = 0.0;
    for (const auto& phi : family) {
        const Vector psi = prepare_initial_pure(phi, dims).amplitudes();
        const Vector after_u00 = ideal_engine.u00().matrix() * psi;
        xi_population =
            std::max(xi_population, after_u00.segment(dims.index(Level::xi, 0, 0), dims.modes_dim()).squaredNorm());
        for (int m = 0; m <= kmax; ++m)
            for (int n = 0; n <= kmax; ++n) {
                const Vector target = target_state(phi, m, n, dims);
                eq3_ideal = std::max(eq3_ideal, (ideal_engine.u_mn(m, n).matrix() * psi - target).norm());
                eq3_compiled = std::max(eq3_compiled, (compiled_engine.u_mn(m, n).matrix() * psi - target).norm());
            }
    }
    checks.push_back(below("eq3_end_to_end_ideal", eq3_ideal, 1e-9));
    checks.push_back(below("eq3_end_to_end_compiled", eq3_compiled, 1e-7));
    checks.push_back(below("xi_residual_population", xi_population, 1e-9));

    double unitarity = unitarity_defect(ideal_engine.u00());
    double agreement = 0.0;
    const Matrix plus_domain = v_plus_domain(dims);
    const Matrix minus_domain = v_minus_domain(dims);
    for (int k = 0; k <= std::min(4, d - 2); ++k) {
        const auto& vp = compiled_engine.v_plus(k);
        const auto& vm = compiled_engine.v_minus(k);
        unitarity = std::max({unitarity, unitarity_defect(vp), unitarity_defect(vm)});
        agreement = std::max(agreement, max_abs((vp.matrix() - ideal_engine.v_plus(k).matrix()) * plus_domain));
        agreement = std::max(agreement, max_abs((vm.matrix() - ideal_engine.v_minus(k).matrix()) * minus_domain));
    }
    checks.push_back(below("unitarity", unitarity, 1e-10));
    checks.push_back(below("ideal_vs_compiled_v", agreement, 1e-8));

    double coherence = 0.0;
    const auto initial = prepare_initial(configured, dims);
    for (int m = 0; m <= kmax; ++m)
        for (int n = 0; n <= kmax; ++n) {
            ProtocolSettings exact = ideal;
            exact.shots.reset();
            const Complex value = ProtocolEngine(exact).measure_element(initial, m, n).value;
            coherence = std::max(coherence, std::abs(value - configured.element(m, n)));
        }
    checks.push_back(below("coherence_identity", coherence, 1e-9));
    return checks;
}

std::vector<double> parse_lambda_list(const std::vector<std::string>& raw)
{
    std::vector<double> lambdas;
    for (const auto& item : raw) {
        std::stringstream ss(item);
        std::string token;
        while (std::getline(ss, token, ',')) {
            if (token.empty())
                continue;
            try {
                std::size_t used = 0;
                const double v = std::stod(token, &used);
                if (used != token.size())
                    throw std::invalid_argument(token);
                lambdas.push_back(v);
            } catch (const std::exception&) {
                throw UsageError("--lambdas: '" + token + "' is not a number");
            }
        }
    }
    return lambdas;
}

} // namespace

int cmd_reconstruct(const RunConfig& config, const CommandOptions& options, std::ostream& out)
{
    const auto settings = config.settings(options.compat_printed_eq6);
    const auto phi = config.build_state();
    const auto report = reconstruct(phi, config.nmax, settings,
                                    {.use_hermitian_symmetry = options.use_hermitian_symmetry, .project = true});
    if (resolve_format(config, options) == OutputFormat::csv) {
        emit(to_csv(report), config, options, out);
    } else {
        json doc = to_json(report);
        doc["config"] = config.echo();
        emit(dump_stable(doc), config, options, out);
    }
    return kExitOk;
}

int cmd_coherence(const RunConfig& config, int m, int n, const CommandOptions& options, std::ostream& out)
{
    const auto settings = config.settings(options.compat_printed_eq6);
    const auto estimate = measure_element(config.build_state(), m, n, settings);
    if (resolve_format(config, options) == OutputFormat::csv) {
        emit(to_csv(estimate), config, options, out);
    } else {
        json doc = to_json(estimate);
        doc["config"] = config.echo();
        emit(dump_stable(doc), config, options, out);
    }
    return kExitOk;
}

int cmd_monitor(const RunConfig& config, const std::vector<double>& lambdas, const CommandOptions& options,
                std::ostream& out)
{
    if (lambdas.empty())
        throw UsageError("monitor needs a non-empty --lambdas list");
    const auto settings = config.settings(options.compat_printed_eq6);
    const auto series = decoherence_monitor(config.build_state(), lambdas, settings);
    if (resolve_format(config, options) == OutputFormat::csv)
        emit(to_csv(series), config, options, out);
    else
        emit(dump_stable({{"series", to_json(series)}, {"config", config.echo()}}), config, options, out);
    return kExitOk;
}

int cmd_validate(const RunConfig& config, const CommandOptions& options, std::ostream& out)
{
    const auto checks = run_checks(config, options.compat_printed_eq6);
    const bool all = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    if (options.format == OutputFormat::json) {
        json rows = json::array();
        for (const auto& c : checks)
            rows.push_back({{"check", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}});
        emit(dump_stable({{"checks", rows}, {"pass", all}}), config, options, out);
    } else {
        std::ostringstream table;
        table << std::left << std::setw(28) << "check" << std::setw(14) << "value" << std::setw(12) << "tolerance"
              << "result\n";
        for (const auto& c : checks)
            table << std::left << std::setw(28) << c.name << std::setw(14) << std::setprecision(3) << c.value
                  << std::setw(12) << c.tolerance << (c.pass ? "PASS" : "FAIL") << '\n';
        table << (all ? "all checks passed\n" : "some checks FAILED\n");
        emit(table.str(), config, options, out);
    }
    return all ? kExitOk : kExitCheckFailed;
}

int cmd_schedule(const RunConfig& config, int m, int n, const CommandOptions& options, std::ostream& out)
{
    const auto settings = config.settings(options.compat_printed_eq6);
    const auto schedule = u_mn_schedule(m, n, settings);
    if (resolve_format(config, options) == OutputFormat::csv)
        emit(to_csv(schedule), config, options, out);
    else
        emit(dump_stable({{"m", m}, {"n", n}, {"pulses", to_json(schedule)}}), config, options, out);
    return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Element-wise vibrational state tomography of a simulated trapped ion"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format;
    CommandOptions options;
    int m = 0;
    int n = 0;
    std::vector<std::string> lambda_args;

    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--out", out_path, "output file (default: stdout)");
    app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--use-hermitian-symmetry", options.use_hermitian_symmetry,
                 "fill (n,m) from conj((m,n)) instead of measuring it");
    app.add_flag("--compat-printed-eq6", options.compat_printed_eq6,
                 "use R-(pi/4) as the last U00 pulse (breaks the target state)");

    auto* reconstruct_cmd = app.add_subcommand("reconstruct", "measure every element of the nmax block");
    auto* coherence_cmd = app.add_subcommand("coherence", "measure one element rho_mn");
    coherence_cmd->add_option("--m", m, "row index")->required();
    coherence_cmd->add_option("--n", n, "column index")->required();
    auto* monitor_cmd = app.add_subcommand("monitor", "|rho_20| vs sqrt(rho_00 rho_22) under dephasing");
    monitor_cmd->add_option("--lambdas", lambda_args, "comma-separated dephasing strengths")->required();
    auto* validate_cmd = app.add_subcommand("validate", "run the invariant checks");
    auto* schedule_cmd = app.add_subcommand("schedule", "print the compiled pulse list of U_mn");
    schedule_cmd->add_option("--m", m, "row index")->required();
    schedule_cmd->add_option("--n", n, "column index")->required();

    // Options given after the subcommand name belong to the parent as well.
    for (auto* sub : {reconstruct_cmd, coherence_cmd, monitor_cmd, validate_cmd, schedule_cmd})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << dump_stable({{"error", {{"kind", "usage"}, {"message", e.what()}}}});
        return kExitUsage;
    }

    try {
        if (!out_path.empty())
            options.out_path = out_path;
        if (!format.empty())
            options.format = parse_format(format);
        const RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);

        if (*reconstruct_cmd)
            return cmd_reconstruct(config, options, out);
        if (*coherence_cmd)
            return cmd_coherence(config, m, n, options, out);
        if (*monitor_cmd)
            return cmd_monitor(config, parse_lambda_list(lambda_args), options, out);
        if (*validate_cmd)
            return cmd_validate(config, options, out);
        if (*schedule_cmd)
            return cmd_schedule(config, m, n, options, out);
    } catch (const UsageError& e) {
        err << dump_stable({{"error", {{"kind", "usage"}, {"message", e.what()}}}});
        return kExitUsage;
    } catch (const std::exception& e) {
        err << dump_stable(error_record(e));
        return kExitError;
    }
    return kExitUsage;
}

} // namespace iontomo::cli
