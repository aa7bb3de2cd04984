#include <grasp/simulation.hpp>
#include <grasp/data.hpp>
#include <grasp/error.hpp>
#include <grasp/parallel.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

namespace grasp::sim {

double CoefficientRule::draw(RngStream& rng) const
{
    switch (kind) {
    case Kind::none:
        return 0.0;
    case Kind::constant:
        return values.front();
    case Kind::uniform_choice: {
        const auto k = static_cast<std::size_t>(rng.uniform() * static_cast<double>(values.size()));
        return values[std::min(k, values.size() - 1)];
    }
    }
    return 0.0;
}

std::string CoefficientRule::to_string() const
{
    std::ostringstream out;
    out.precision(17);
    if (kind == Kind::none) {
        return "-";
    }
    if (kind == Kind::constant) {
        out << values.front();
        return out.str();
    }
    out << "U(";
    for (std::size_t i = 0; i < values.size(); ++i) {
        out << (i ? "," : "") << values[i];
    }
    out << ")";
    return out.str();
}

std::size_t SimScenario::p() const
{
    std::size_t total = 0;
    for (const GroupSpec& g : groups) {
        total += g.size;
    }
    return total;
}

std::vector<std::size_t> SimScenario::group_index() const
{
    std::vector<std::size_t> index;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        index.insert(index.end(), groups[g].size, g);
    }
    return index;
}

void SimScenario::validate() const
{
    if (groups.empty()) {
        throw UsageError("scenario '" + name + "': no groups");
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const GroupSpec& spec = groups[g];
        if (spec.size == 0) {
            throw UsageError("scenario '" + name + "': group " + std::to_string(g + 1) + " is empty");
        }
        if (spec.active > spec.size) {
            throw UsageError("scenario '" + name + "': group " + std::to_string(g + 1)
                             + " has more actives than members");
        }
        if (spec.active > 0 && (spec.rule.kind == CoefficientRule::Kind::none || spec.rule.values.empty())) {
            throw UsageError("scenario '" + name + "': group " + std::to_string(g + 1)
                             + " has actives but no coefficient rule");
        }
    }
    if (n < 2) {
        throw UsageError("scenario '" + name + "': need n >= 2");
    }
    if (!(snr > 0.0) || !std::isfinite(snr)) {
        throw UsageError("scenario '" + name + "': snr must be positive");
    }
    if (replicates == 0) {
        throw UsageError("scenario '" + name + "': replicates must be positive");
    }
    if (!(std::abs(within_corr) < 1.0) || !(std::abs(across_corr) < 1.0)) {
        throw UsageError("scenario '" + name + "': correlations must lie in (-1, 1)");
    }
}

SimScenario SimScenario::named(const std::string& name, double snr, std::size_t replicates)
{
    using R = CoefficientRule;
    SimScenario s;
    s.name = name;
    s.snr = snr;
    s.replicates = replicates;
    if (name == "concentrated") {
        s.n = 500;
        for (double v : {0.5, 1.0, 1.5, 2.0, 2.0}) {
            s.groups.push_back({10, 1, R::constant(v)});
        }
    } else if (name == "distributed") {
        s.n = 500;
        s.groups.push_back({10, 10, R::constant(0.5)});
        for (int g = 0; g < 4; ++g) {
            s.groups.push_back({10, 0, R::none()});
        }
    } else if (name == "dense") {
        s.n = 300;
        s.groups = {
            {30, 27, R::uniform({3, 5, 8})},
            {10, 8, R::uniform({2, 3, 4, 5})},
            {20, 18, R::constant(7.5)},
            {5, 4, R::uniform({9.5, 8, 7})},
            {15, 14, R::constant(1.5)},
            {20, 18, R::constant(0.5)},
        };
    } else if (name == "half") {
        s.n = 200;
        s.groups = {
            {25, 22, R::constant(0.8)},
            {10, 0, R::none()},
            {10, 3, R::constant(2.5)},
            {10, 8, R::constant(1.5)},
            {5, 0, R::none()},
            {15, 4, R::uniform({1, 2, 3, 5})},
            {5, 1, R::constant(2)},
        };
    } else {
        throw UsageError("unknown scenario '" + name + "' (expected concentrated, distributed, dense or half)");
    }
    return s;
}

Matrix build_covariance(const SimScenario& scenario)
{
    const std::vector<std::size_t> group = scenario.group_index();
    const std::size_t p = group.size();
    Matrix sigma(p, p);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            sigma(i, j) = i == j ? 1.0 : (group[i] == group[j] ? scenario.within_corr : scenario.across_corr);
        }
    }
    linalg::cholesky(sigma);  // throws if not SPD
    return sigma;
}

double calibrate_noise(const SimScenario& scenario, std::span<const double> beta, const Matrix& sigma)
{
    const double signal = linalg::quadratic_form(sigma, beta);
    if (!(signal > 0.0)) {
        throw DomainError("calibrate_noise: signal variance must be positive (all coefficients zero?)");
    }
    if (!(scenario.snr > 0.0)) {
        throw DomainError("calibrate_noise: snr must be positive");
    }
    return scenario.noise == NoiseDefinition::variance_ratio ? signal / scenario.snr
                                                             : signal / (scenario.snr * scenario.snr);
}

Replicate generate_replicate(RngStream& rng, const SimScenario& scenario, const Matrix& sigma_factor)
{
    scenario.validate();
    const std::size_t n = scenario.n;
    const std::size_t p = scenario.p();
    if (sigma_factor.rows() != p || sigma_factor.cols() != p) {
        throw DomainError("generate_replicate: covariance factor has the wrong size");
    }
    Replicate r;
    r.truth.assign(p, 0.0);
    std::size_t offset = 0;
    for (const GroupSpec& g : scenario.groups) {
        for (std::size_t k = 0; k < g.active; ++k) {
            r.truth[offset + k] = g.rule.draw(rng);
        }
        offset += g.size;
    }
    Matrix cov(p, p);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double v = 0.0;
            for (std::size_t k = 0; k <= j; ++k) {
                v += sigma_factor(i, k) * sigma_factor(j, k);
            }
            cov(i, j) = cov(j, i) = v;
        }
    }
    r.sigma2 = calibrate_noise(scenario, r.truth, cov);

    r.data.x = Matrix(n, p);
    std::vector<double> z(p);
    for (std::size_t i = 0; i < n; ++i) {
        for (double& v : z) {
            v = rng.normal();
        }
        auto row = r.data.x.row(i);
        for (std::size_t a = 0; a < p; ++a) {
            double v = 0.0;
            for (std::size_t k = 0; k <= a; ++k) {
                v += sigma_factor(a, k) * z[k];
            }
            row[a] = v;
        }
    }
    r.data.y = linalg::multiply(r.data.x, r.truth);
    const double sd = std::sqrt(r.sigma2);
    for (double& v : r.data.y) {
        v += sd * rng.normal();
    }
    r.data.groups = scenario.group_index();
    return r;
}

Replicate generate_replicate(RngStream& rng, const SimScenario& scenario)
{
    return generate_replicate(rng, scenario, linalg::cholesky(build_covariance(scenario)));
}

MseReport evaluate(std::span<const double> estimate, std::span<const double> truth)
{
    if (estimate.size() != truth.size()) {
        throw DataError("evaluate: estimate has " + std::to_string(estimate.size()) + " entries, truth has "
                        + std::to_string(truth.size()));
    }
    MseReport r;
    for (std::size_t j = 0; j < truth.size(); ++j) {
        const double d = estimate[j] - truth[j];
        if (truth[j] == 0.0) {
            r.z0 += d * d;
        } else {
            r.nz0 += d * d;
        }
    }
    r.oa = r.z0 + r.nz0;
    return r;
}

std::string estimator_name(Estimator e)
{
    switch (e) {
    case Estimator::ols:
        return "ols";
    case Estimator::rasp:
        return "rasp";
    case Estimator::grasp_fixed_a:
        return "grasp-a1n";
    case Estimator::grasp_learned:
        return "grasp";
    }
    return "?";
}

Estimator parse_estimator(const std::string& name)
{
    for (Estimator e : {Estimator::ols, Estimator::rasp, Estimator::grasp_fixed_a, Estimator::grasp_learned}) {
        if (estimator_name(e) == name) {
            return e;
        }
    }
    throw UsageError("unknown estimator '" + name + "' (expected ols, rasp, grasp-a1n or grasp)");
}

std::vector<Estimator> parse_estimator_list(const std::string& list)
{
    std::vector<Estimator> out;
    std::stringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        item = first == std::string::npos ? "" : item.substr(first, item.find_last_not_of(" \t") - first + 1);
        if (!item.empty()) {
            out.push_back(parse_estimator(item));
        }
    }
    if (out.empty()) {
        throw UsageError("estimator list is empty");
    }
    return out;
}

HyperConfig estimator_config(Estimator e, std::size_t n, const SamplerSchedule& schedule, std::uint64_t seed)
{
    HyperConfig c;
    c.burnin = schedule.burnin;
    c.samples = schedule.samples;
    c.thin = schedule.thin;
    c.chains = 1;
    c.threads = 1;
    c.seed = seed;
    c.local_shapes = {ShapeSetting::learned()};
    switch (e) {
    case Estimator::ols:
        throw UsageError("ols has no sampler configuration");
    case Estimator::rasp:
        c.grouped = false;
        break;
    case Estimator::grasp_fixed_a:
        c.grouped = true;
        c.group_shapes = ShapeSetting::pinned_a(1.0 / static_cast<double>(n));
        break;
    case Estimator::grasp_learned:
        c.grouped = true;
        c.group_shapes = ShapeSetting::learned();
        break;
    }
    return c;
}

std::vector<double> fit_estimator(Estimator e, const DesignData& raw, const SamplerSchedule& schedule,
                                  std::uint64_t seed)
{
    data::StandardizedData s = data::standardize(raw.x, raw.y, {});
    std::vector<double> beta_std;
    if (e == Estimator::ols) {
        beta_std = linalg::least_squares(s.x, s.y);
    } else {
        DesignData d{std::move(s.x), std::move(s.y), raw.groups};
        beta_std = run_chain(d, estimator_config(e, raw.n(), schedule, seed)).beta_mean();
    }
    return s.record.to_original(beta_std);
}

std::vector<StudyRow> run_study(const StudyConfig& config)
{
    if (config.estimators.empty()) {
        throw UsageError("study: no estimators");
    }
    const RngStream master(config.seed);
    const std::size_t m = config.estimators.size();
    std::vector<StudyRow> rows;
    std::size_t total_fits = 0;
    std::size_t total_failures = 0;
    std::string first_failure;

    for (std::size_t si = 0; si < config.scenarios.size(); ++si) {
        const SimScenario& scenario = config.scenarios[si];
        scenario.validate();
        const Matrix factor = linalg::cholesky(build_covariance(scenario));
        const RngStream scenario_stream = master.child(si);

        struct Cell
        {
            MseReport mse;
            bool ok = false;
            std::string error;
        };
        std::vector<Cell> cells(scenario.replicates * m);

        parallel_for(scenario.replicates, worker_count(config.threads), [&](std::size_t r) {
            const RngStream rep = scenario_stream.child(r);
            RngStream data_rng = rep.child(0);
            const Replicate replicate = generate_replicate(data_rng, scenario, factor);
            for (std::size_t k = 0; k < m; ++k) {
                RngStream seed_rng = rep.child(1 + static_cast<std::uint64_t>(config.estimators[k]));
                Cell& cell = cells[r * m + k];
                const auto start = std::chrono::steady_clock::now();
                try {
                    const std::vector<double> est =
                        fit_estimator(config.estimators[k], replicate.data, config.schedule, seed_rng.next_u64());
                    cell.mse = evaluate(est, replicate.truth);
                    cell.ok = true;
                } catch (const NumericalError& e) {
                    cell.error = e.what();
                }
                cell.mse.wall_time =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            }
        });

        for (std::size_t k = 0; k < m; ++k) {
            StudyRow row;
            row.scenario = scenario.name;
            row.snr = scenario.snr;
            row.estimator = estimator_name(config.estimators[k]);
            for (std::size_t r = 0; r < scenario.replicates; ++r) {
                const Cell& cell = cells[r * m + k];
                row.time_s += cell.mse.wall_time;
                if (!cell.ok) {
                    ++row.failures;
                    if (first_failure.empty()) {
                        first_failure = cell.error;
                    }
                    continue;
                }
                ++row.replicates;
                row.z0 += cell.mse.z0;
                row.nz0 += cell.mse.nz0;
            }
            if (row.replicates > 0) {
                const double count = static_cast<double>(row.replicates);
                row.z0 /= count;
                row.nz0 /= count;
            }
            row.oa = row.z0 + row.nz0;
            row.time_s /= static_cast<double>(scenario.replicates);
            total_fits += scenario.replicates;
            total_failures += row.failures;
            rows.push_back(std::move(row));
        }
    }
    if (total_fits > 0
        && static_cast<double>(total_failures) > config.failure_tolerance * static_cast<double>(total_fits)) {
        throw NumericalError("study: " + std::to_string(total_failures) + " of " + std::to_string(total_fits)
                             + " fits aborted; first failure: " + first_failure);
    }
    return rows;
}

namespace {

std::string trim(std::string s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& v, std::size_t line)
{
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used == v.size()) {
            return d;
        }
    } catch (const std::exception&) {
    }
    throw ParseError("scenario line " + std::to_string(line) + ": not a number: '" + v + "'", line, 0);
}

std::size_t to_count(const std::string& v, std::size_t line)
{
    const double d = to_double(v, line);
    if (d < 0.0 || d != std::floor(d)) {
        throw ParseError("scenario line " + std::to_string(line) + ": not a count: '" + v + "'", line, 0);
    }
    return static_cast<std::size_t>(d);
}

CoefficientRule parse_rule(std::string text, std::size_t line)
{
    text = trim(text);
    if (text == "-" || text.empty()) {
        return CoefficientRule::none();
    }
    if (text.size() > 3 && (text[0] == 'U' || text[0] == 'u') && (text[1] == '(' || text[1] == '[')) {
        const char close = text[1] == '(' ? ')' : ']';
        if (text.back() != close) {
            throw ParseError("scenario line " + std::to_string(line) + ": unbalanced brackets", line, 0);
        }
        std::vector<double> values;
        std::stringstream in(text.substr(2, text.size() - 3));
        std::string item;
        while (std::getline(in, item, ',')) {
            values.push_back(to_double(trim(item), line));
        }
        if (values.empty()) {
            throw ParseError("scenario line " + std::to_string(line) + ": empty value list", line, 0);
        }
        return CoefficientRule::uniform(std::move(values));
    }
    return CoefficientRule::constant(to_double(text, line));
}

} // namespace

SimScenario parse_scenario(const std::string& text)
{
    SimScenario s;
    std::vector<GroupSpec> groups;
    bool have_base = false;
    bool have_groups = false;
    std::stringstream in(text);
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (content.empty()) {
            continue;
        }
        const auto colon = content.find(':');
        if (colon == std::string::npos) {
            throw ParseError("scenario line " + std::to_string(line) + ": expected 'key: value'", line, 0);
        }
        const std::string key = trim(content.substr(0, colon));
        const std::string value = trim(content.substr(colon + 1));
        if (key == "base") {
            const SimScenario base = SimScenario::named(value, s.snr, s.replicates);
            const std::string keep_name = s.name;
            s = base;
            if (!keep_name.empty()) {
                s.name = keep_name;
            }
            have_base = true;
        } else if (key == "name") {
            s.name = value;
        } else if (key == "n") {
            s.n = to_count(value, line);
        } else if (key == "snr") {
            s.snr = to_double(value, line);
        } else if (key == "replicates") {
            s.replicates = to_count(value, line);
        } else if (key == "within_corr") {
            s.within_corr = to_double(value, line);
        } else if (key == "across_corr") {
            s.across_corr = to_double(value, line);
        } else if (key == "noise") {
            if (value == "variance") {
                s.noise = NoiseDefinition::variance_ratio;
            } else if (value == "amplitude") {
                s.noise = NoiseDefinition::amplitude_ratio;
            } else {
                throw ParseError("scenario line " + std::to_string(line) + ": noise must be variance or amplitude",
                                 line, 0);
            }
        } else if (key == "group") {
            std::stringstream fields(value);
            std::string size, active, rule;
            fields >> size >> active;
            std::getline(fields, rule);
            if (size.empty() || active.empty()) {
                throw ParseError("scenario line " + std::to_string(line) + ": group needs size, active, rule",
                                 line, 0);
            }
            groups.push_back({to_count(size, line), to_count(active, line), parse_rule(rule, line)});
            have_groups = true;
        } else {
            throw ParseError("scenario line " + std::to_string(line) + ": unknown key '" + key + "'", line, 0);
        }
    }
    if (have_groups) {
        s.groups = std::move(groups);
    }
    if (s.name.empty()) {
        s.name = have_base ? "custom" : "scenario";
    }
    s.validate();
    return s;
}

SimScenario read_scenario_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open scenario file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

} // namespace grasp::sim
