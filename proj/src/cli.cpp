#include <grasp/cli.hpp>
#include <grasp/csv.hpp>
#include <grasp/data.hpp>
#include <grasp/error.hpp>
#include <grasp/gibbs.hpp>
#include <grasp/prior_analysis.hpp>
#include <grasp/reports.hpp>
#include <grasp/shape_sampler.hpp>
#include <grasp/simulation.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace grasp::cli {
namespace {

namespace fs = std::filesystem;

void emit(const csv::Table& table, const std::string& path, std::ostream& out)
{
    if (path.empty() || path == "-") {
        csv::write(out, table);
    } else {
        const fs::path parent = fs::path(path).parent_path();
        if (!parent.empty()) {
            fs::create_directories(parent);
        }
        csv::write_file(path, table);
    }
}

fs::path prepare_dir(const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw DataError("cannot create output directory '" + dir + "'");
    }
    return fs::path(dir);
}

double parse_real(const std::string& text, const std::string& what)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw UsageError(what + ": not a number: '" + text + "'");
}

// "learn" or "fixed:a,b"
ShapeSetting parse_shapes(const std::string& text)
{
    if (text == "learn") {
        return ShapeSetting::learned();
    }
    if (text.rfind("fixed:", 0) == 0) {
        const std::string rest = text.substr(6);
        const auto comma = rest.find(',');
        if (comma == std::string::npos) {
            throw UsageError("--shapes: expected fixed:a,b");
        }
        return ShapeSetting::fixed(parse_real(rest.substr(0, comma), "--shapes"),
                                   parse_real(rest.substr(comma + 1), "--shapes"));
    }
    throw UsageError("--shapes: expected 'learn' or 'fixed:a,b', got '" + text + "'");
}

// "name=value,name=value"
std::map<std::string, double> parse_params(const std::string& text)
{
    std::map<std::string, double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) {
            continue;
        }
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw UsageError("--params: expected name=value, got '" + item + "'");
        }
        out[item.substr(0, eq)] = parse_real(item.substr(eq + 1), "--params " + item.substr(0, eq));
    }
    return out;
}

prior::ShrinkagePriorKind parse_kind(const std::string& kind, const std::map<std::string, double>& params)
{
    auto has = [&](const char* k) { return params.count(k) != 0; };
    auto get = [&](const char* k) { return params.at(k); };
    auto only = [&](std::initializer_list<const char*> allowed) {
        for (const auto& [k, v] : params) {
            if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
                throw UsageError("--params: '" + k + "' does not apply to " + kind);
            }
        }
    };
    prior::ShrinkagePriorKind out;
    if (kind == "lasso") {
        only({});
        out = prior::ShrinkagePriorKind::lasso();
    } else if (kind == "horseshoe") {
        only({});
        out = prior::ShrinkagePriorKind::horseshoe();
    } else if (kind == "student-t") {
        only({"gamma", "a", "b"});
        if (has("gamma")) {
            out = prior::ShrinkagePriorKind::student_t(get("gamma"));
        } else if (has("a") && has("b")) {
            out = prior::ShrinkagePriorKind::student_t(get("a"), get("b"));
        } else {
            throw UsageError("student-t needs gamma=, or a= and b=");
        }
    } else if (kind == "beta-prime") {
        only({"a", "b", "mu", "nu"});
        if (has("a") && has("b")) {
            out = prior::ShrinkagePriorKind::beta_prime(get("a"), get("b"));
        } else if (has("mu") && has("nu")) {
            out = prior::beta_prime_from_mean_precision(get("mu"), get("nu"));
        } else {
            throw UsageError("beta-prime needs a= and b=, or mu= and nu=");
        }
    } else {
        throw UsageError("unknown --kind '" + kind + "' (expected lasso, student-t, horseshoe or beta-prime)");
    }
    out.validate();
    return out;
}

std::vector<double> parse_grid(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ':')) {
        parts.push_back(item);
    }
    if (parts.size() != 3) {
        throw UsageError("--grid: expected lo:hi:step");
    }
    const double lo = parse_real(parts[0], "--grid");
    const double hi = parse_real(parts[1], "--grid");
    const double step = parse_real(parts[2], "--grid");
    if (!(step > 0.0) || !(hi >= lo)) {
        throw UsageError("--grid: need hi >= lo and step > 0");
    }
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 10'000'000) {
        throw UsageError("--grid: too many points");
    }
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) {
        grid[i] = lo + static_cast<double>(i) * step;
    }
    return grid;
}

std::vector<double> read_unit_column(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path + "'");
    }
    std::vector<double> values;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line.find(',') != std::string::npos) {
            throw ParseError(path + ": expected a single column (row " + std::to_string(row) + ")", row, 2);
        }
        double v;
        try {
            v = csv::parse_number(line, row, 1);
        } catch (const ParseError&) {
            if (row == 1) {
                continue;  // header
            }
            throw;
        }
        if (!(v > 0.0 && v < 1.0)) {
            throw DataError(path + ": value at row " + std::to_string(row) + " is outside (0, 1)");
        }
        values.push_back(v);
    }
    if (values.empty()) {
        throw DataError(path + ": no values");
    }
    return values;
}

struct FitArgs
{
    std::string data;
    std::string response;
    std::string groups = "none";
    std::size_t burnin = 1000;
    std::size_t samples = 1000;
    std::size_t thin = 1;
    std::size_t chains = 1;
    std::uint64_t seed = 1;
    std::size_t threads = 0;
    std::string fix_a_delta;
    std::string shapes = "learn";
    bool dump_chains = false;
    std::string out;
};

int run_fit(const FitArgs& a, std::ostream& out)
{
    if (a.samples == 0 || a.thin == 0 || a.chains == 0) {
        throw UsageError("--samples, --thin and --chains must be positive");
    }
    const data::LoadedDataset d = data::load_and_standardize({a.data, a.response, a.groups});
    HyperConfig config;
    config.grouped = d.grouped;
    config.local_shapes = {parse_shapes(a.shapes)};
    config.group_shapes = config.local_shapes.front();
    if (!a.fix_a_delta.empty()) {
        if (!d.grouped) {
            throw UsageError("--fix-a-delta needs --groups");
        }
        const double value = a.fix_a_delta == "1/n" ? 1.0 / static_cast<double>(d.design.n())
                                                    : parse_real(a.fix_a_delta, "--fix-a-delta");
        config.group_shapes = ShapeSetting::pinned_a(value, config.group_shapes.b);
    }
    config.burnin = a.burnin;
    config.samples = a.samples;
    config.thin = a.thin;
    config.chains = a.chains;
    config.seed = a.seed;
    config.threads = a.threads;

    const PosteriorDraws draws = run_chain(d.design, config);
    const fs::path dir = prepare_dir(a.out);
    csv::write_file((dir / "summary.csv").string(), report::summary_table(report::coefficient_summary(draws, d.record)));
    csv::write_file((dir / "intercept.csv").string(), report::summary_table({report::intercept_summary(draws, d.record)}));
    csv::write_file((dir / "diagnostics.csv").string(), report::diagnostics_table(report::diagnostics(draws, config)));
    if (a.dump_chains) {
        csv::write_file((dir / "chains.csv").string(), report::chains_table(draws, d.record));
    }
    out << "wrote " << (dir / "summary.csv").string() << " (" << d.design.p() << " coefficients, "
        << draws.rows() << " draws)\n";
    return exit_ok;
}

struct SimulateArgs
{
    std::string scenario;
    std::string scenario_file;
    std::optional<double> snr;
    std::optional<std::size_t> replicates;
    std::string noise;
    std::string estimators = "ols,rasp,grasp-a1n,grasp";
    std::uint64_t seed = 1;
    std::size_t burnin = 2000;
    std::size_t samples = 2000;
    std::size_t thin = 1;
    std::size_t threads = 0;
    std::string out;
};

int run_simulate(const SimulateArgs& a, std::ostream& out)
{
    if (a.scenario.empty() == a.scenario_file.empty()) {
        throw UsageError("give exactly one of --scenario or --scenario-file");
    }
    sim::SimScenario scenario = a.scenario_file.empty() ? sim::SimScenario::named(a.scenario)
                                                        : sim::read_scenario_file(a.scenario_file);
    if (a.snr) {
        scenario.snr = *a.snr;
    }
    if (a.replicates) {
        scenario.replicates = *a.replicates;
    }
    if (a.noise == "variance") {
        scenario.noise = sim::NoiseDefinition::variance_ratio;
    } else if (a.noise == "amplitude") {
        scenario.noise = sim::NoiseDefinition::amplitude_ratio;
    } else if (!a.noise.empty()) {
        throw UsageError("--noise: expected variance or amplitude");
    }
    sim::StudyConfig study;
    study.scenarios = {scenario};
    study.estimators = sim::parse_estimator_list(a.estimators);
    study.schedule = {a.burnin, a.samples, a.thin};
    if (a.samples == 0 || a.thin == 0) {
        throw UsageError("--samples and --thin must be positive");
    }
    study.seed = a.seed;
    study.threads = a.threads;
    const std::vector<sim::StudyRow> rows = sim::run_study(study);
    const fs::path dir = prepare_dir(a.out);
    csv::write_file((dir / "report.csv").string(), report::study_table(rows));
    csv::write_file((dir / "timing.csv").string(), report::timing_table(rows));
    csv::write(out, report::study_table(rows));
    return exit_ok;
}

int report_error(std::ostream& err, std::string_view kind, const std::string& message, int code)
{
    std::string line = message;
    std::replace(line.begin(), line.end(), '\n', ' ');
    err << "error: " << kind << ": " << line << '\n';
    return code;
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Bayesian grouped regression with beta prime shrinkage priors", "grasp"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    FitArgs fit;
    CLI::App* fit_cmd = app.add_subcommand("fit", "Fit GRASP (with --groups) or RASP to a CSV data set");
    fit_cmd->add_option("--data", fit.data, "Data CSV with a header row")->required();
    fit_cmd->add_option("--response", fit.response, "Name of the response column")->required();
    fit_cmd->add_option("--groups", fit.groups, "Group spec CSV (column_name,group_id) or 'none'");
    fit_cmd->add_option("--burnin", fit.burnin, "Burn-in sweeps per chain");
    fit_cmd->add_option("--samples", fit.samples, "Sweeps after burn-in per chain");
    fit_cmd->add_option("--thin", fit.thin, "Keep every thin-th sweep");
    fit_cmd->add_option("--chains", fit.chains, "Independent chains");
    fit_cmd->add_option("--seed", fit.seed, "Master seed");
    fit_cmd->add_option("--threads", fit.threads, "Worker threads (0: all cores)");
    fit_cmd->add_option("--fix-a-delta", fit.fix_a_delta, "Pin the group shape a (number or 1/n)");
    fit_cmd->add_option("--shapes", fit.shapes, "Shape handling: learn | fixed:a,b");
    fit_cmd->add_flag("--dump-chains", fit.dump_chains, "Also write chains.csv");
    fit_cmd->add_option("--out", fit.out, "Output directory")->required();

    SimulateArgs simulate;
    std::string snr_text, replicates_text;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "Run a simulation study and write report.csv");
    sim_cmd->add_option("--scenario", simulate.scenario, "concentrated | distributed | dense | half");
    sim_cmd->add_option("--scenario-file", simulate.scenario_file, "Plain-text scenario definition");
    sim_cmd->add_option("--snr", snr_text, "Signal-to-noise ratio");
    sim_cmd->add_option("--replicates", replicates_text, "Replicates");
    sim_cmd->add_option("--noise", simulate.noise, "variance (sigma2 = b'Sb/snr) | amplitude (b'Sb/snr^2)");
    sim_cmd->add_option("--estimators", simulate.estimators, "Comma list of ols, rasp, grasp-a1n, grasp");
    sim_cmd->add_option("--seed", simulate.seed, "Master seed");
    sim_cmd->add_option("--burnin", simulate.burnin, "Burn-in sweeps per fit");
    sim_cmd->add_option("--samples", simulate.samples, "Kept sweeps per fit");
    sim_cmd->add_option("--thin", simulate.thin, "Thinning");
    sim_cmd->add_option("--threads", simulate.threads, "Worker threads (0: all cores)");
    sim_cmd->add_option("--out", simulate.out, "Output directory")->required();

    std::string corr_family = "grasp", corr_scenario = "a", corr_out;
    std::size_t corr_draws = 100000;
    std::uint64_t corr_seed = 1;
    CLI::App* corr_cmd = app.add_subcommand("prior-corr", "Histogram of the prior within-group correlation");
    corr_cmd->add_option("--family", corr_family, "grasp | gigg");
    corr_cmd->add_option("--scenario", corr_scenario, "a | b | c | d");
    corr_cmd->add_option("--draws", corr_draws, "Hyperparameter draws");
    corr_cmd->add_option("--seed", corr_seed, "Seed");
    corr_cmd->add_option("--out", corr_out, "Output CSV (default: stdout)");

    std::string dens_kind = "horseshoe", dens_params, dens_grid = "0.1:5:0.1", dens_space = "lambda", dens_out;
    CLI::App* dens_cmd = app.add_subcommand("prior-density", "Tabulate a local-scale prior density");
    dens_cmd->add_option("--kind", dens_kind, "lasso | student-t | horseshoe | beta-prime");
    dens_cmd->add_option("--params", dens_params, "e.g. a=0.5,b=0.5 | mu=0.3,nu=1 | gamma=1");
    dens_cmd->add_option("--grid", dens_grid, "lo:hi:step");
    dens_cmd->add_option("--space", dens_space, "lambda | xi");
    dens_cmd->add_option("--out", dens_out, "Output CSV (default: stdout)");

    std::string shape_data, shape_out;
    std::size_t shape_sweeps = 5000, shape_burnin = 500;
    std::uint64_t shape_seed = 1;
    CLI::App* shape_cmd = app.add_subcommand("shape-fit", "Posterior of Beta(a, b) shapes for values in (0, 1)");
    shape_cmd->add_option("--data", shape_data, "Single-column file of values in (0, 1)")->required();
    shape_cmd->add_option("--sweeps", shape_sweeps, "Kept sweeps");
    shape_cmd->add_option("--burnin", shape_burnin, "Discarded sweeps");
    shape_cmd->add_option("--seed", shape_seed, "Seed");
    shape_cmd->add_option("--out", shape_out, "Output CSV (default: stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        try {
            app.parse(std::move(reversed));
        } catch (const CLI::CallForHelp&) {
            out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
            return exit_ok;
        } catch (const CLI::CallForAllHelp&) {
            out << app.help("", CLI::AppFormatMode::All);
            return exit_ok;
        } catch (const CLI::ParseError& e) {
            return report_error(err, "usage_error", e.what(), exit_usage);
        }

        if (fit_cmd->parsed()) {
            return run_fit(fit, out);
        }
        if (sim_cmd->parsed()) {
            if (!snr_text.empty()) {
                simulate.snr = parse_real(snr_text, "--snr");
            }
            if (!replicates_text.empty()) {
                const double r = parse_real(replicates_text, "--replicates");
                if (!(r >= 1.0) || r != std::floor(r)) {
                    throw UsageError("--replicates must be a positive integer");
                }
                simulate.replicates = static_cast<std::size_t>(r);
            }
            return run_simulate(simulate, out);
        }
        if (corr_cmd->parsed()) {
            prior::Family family;
            if (corr_family == "grasp") {
                family = prior::Family::grasp;
            } else if (corr_family == "gigg") {
                family = prior::Family::gigg;
            } else {
                throw UsageError("--family: expected grasp or gigg");
            }
            RngStream rng(corr_seed);
            const prior::Histogram h =
                prior::corr_distribution(rng, prior::HyperpriorScenario::named(corr_scenario, corr_draws), family);
            emit(report::histogram_table(h), corr_out, out);
            return exit_ok;
        }
        if (dens_cmd->parsed()) {
            const prior::ShrinkagePriorKind kind = parse_kind(dens_kind, parse_params(dens_params));
            if (dens_space != "lambda" && dens_space != "xi") {
                throw UsageError("--space: expected lambda or xi");
            }
            std::vector<report::DensityRow> rows;
            for (double x : parse_grid(dens_grid)) {
                if (dens_space == "lambda" && !(x > 0.0)) {
                    throw UsageError("--grid: lambda values must be positive");
                }
                const double ld = dens_space == "lambda" ? prior::log_density_lambda(kind, x)
                                                         : prior::log_density_xi(kind, x);
                rows.push_back({x, ld, std::exp(ld)});
            }
            emit(report::density_table(rows, dens_space), dens_out, out);
            return exit_ok;
        }
        if (shape_cmd->parsed()) {
            const std::vector<double> values = read_unit_column(shape_data);
            RngStream rng(shape_seed);
            shape::ShapeChainOptions options;
            options.sweeps = shape_burnin + shape_sweeps;
            if (shape_sweeps == 0) {
                throw UsageError("--sweeps must be positive");
            }
            const shape::ShapeChain chain = shape::gibbs_shape_pair(rng, values, options);
            csv::Table t;
            t.header = {"parameter", "mean", "sd", "q2.5", "q97.5", "acceptance_rate"};
            auto add = [&](const char* name, const std::vector<double>& draws, const shape::AcceptanceCounter& c) {
                const ParameterSummary s =
                    summarize(std::span<const double>(draws).subspan(std::min(shape_burnin, draws.size())));
                t.rows.push_back({name, csv::format_number(s.mean), csv::format_number(s.sd),
                                  csv::format_number(s.lower), csv::format_number(s.upper),
                                  csv::format_number(c.rate())});
            };
            add("a", chain.a, chain.a_acceptance);
            add("b", chain.b, chain.b_acceptance);
            emit(t, shape_out, out);
            return exit_ok;
        }
        return report_error(err, "usage_error", "no subcommand", exit_usage);
    } catch (const UsageError& e) {
        return report_error(err, e.kind(), e.what(), exit_usage);
    } catch (const DomainError& e) {
        return report_error(err, e.kind(), e.what(), exit_usage);
    } catch (const DataError& e) {
        return report_error(err, e.kind(), e.what(), exit_data);
    } catch (const NumericalError& e) {
        return report_error(err, e.kind(), e.what(), exit_numerical);
    } catch (const Error& e) {
        return report_error(err, e.kind(), e.what(), exit_numerical);
    } catch (const fs::filesystem_error& e) {
        return report_error(err, "data_error", e.what(), exit_data);
    }
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return dispatch(args, out, err);
}

} // namespace grasp::cli
