#include <grasp/reports.hpp>
#include <grasp/error.hpp>

namespace grasp::report {

using csv::format_count;
using csv::format_number;

std::vector<SummaryRow> coefficient_summary(const PosteriorDraws& draws, const data::Standardization& record)
{
    const std::size_t p = draws.beta.cols();
    std::vector<SummaryRow> rows(p);
    std::vector<double> column(draws.rows());
    for (std::size_t j = 0; j < p; ++j) {
        const double factor = record.y_sd / record.x_sd[j];
        for (std::size_t i = 0; i < column.size(); ++i) {
            column[i] = draws.beta(i, j) * factor;
        }
        const ParameterSummary s = summarize(column);
        rows[j] = {record.names[j], s.mean, s.sd, s.lower, s.upper};
    }
    return rows;
}

SummaryRow intercept_summary(const PosteriorDraws& draws, const data::Standardization& record)
{
    std::vector<double> values(draws.rows());
    std::vector<double> beta(draws.beta.cols());
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (std::size_t j = 0; j < beta.size(); ++j) {
            beta[j] = draws.beta(i, j);
        }
        values[i] = record.intercept(record.to_original(beta));
    }
    const ParameterSummary s = summarize(values);
    return {"(intercept)", s.mean, s.sd, s.lower, s.upper};
}

csv::Table summary_table(const std::vector<SummaryRow>& rows)
{
    csv::Table t;
    t.header = {"coefficient", "mean", "sd", "q2.5", "q97.5"};
    for (const SummaryRow& r : rows) {
        t.rows.push_back({r.coefficient, format_number(r.mean), format_number(r.sd), format_number(r.q025),
                          format_number(r.q975)});
    }
    return t;
}

std::vector<SummaryRow> read_summary(const csv::Table& t)
{
    csv::require_header(t, {"coefficient", "mean", "sd", "q2.5", "q97.5"}, "summary");
    std::vector<SummaryRow> rows;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& f = t.rows[i];
        rows.push_back({f[0], csv::parse_number(f[1], i + 2, 2), csv::parse_number(f[2], i + 2, 3),
                        csv::parse_number(f[3], i + 2, 4), csv::parse_number(f[4], i + 2, 5)});
    }
    return rows;
}

std::vector<DiagnosticRow> diagnostics(const PosteriorDraws& draws, const HyperConfig& config)
{
    std::vector<DiagnosticRow> rows;
    auto add = [&](const std::string& name, auto&& pick) {
        shape::AcceptanceCounter total;
        for (const ChainDiagnostics& d : draws.diagnostics) {
            const shape::AcceptanceCounter& c = pick(d);
            total.attempts += c.attempts;
            total.accepted += c.accepted;
            total.skipped += c.skipped;
        }
        rows.push_back({name, total.attempts, total.accepted, total.skipped, total.rate()});
    };
    const std::size_t groups = draws.diagnostics.empty() ? 0 : draws.diagnostics.front().local_a.size();
    for (std::size_t g = 0; g < groups; ++g) {
        const ShapeSetting& s = config.local_shapes.size() == 1 ? config.local_shapes[0] : config.local_shapes[g];
        const std::string suffix = config.grouped ? "[" + std::to_string(g + 1) + "]" : "";
        if (s.learns_a()) {
            add("local_a" + suffix, [g](const ChainDiagnostics& d) -> const auto& { return d.local_a[g]; });
        }
        if (s.learns_b()) {
            add("local_b" + suffix, [g](const ChainDiagnostics& d) -> const auto& { return d.local_b[g]; });
        }
    }
    if (config.grouped && config.group_shapes.learns_a()) {
        add("group_a", [](const ChainDiagnostics& d) -> const auto& { return d.group_a; });
    }
    if (config.grouped && config.group_shapes.learns_b()) {
        add("group_b", [](const ChainDiagnostics& d) -> const auto& { return d.group_b; });
    }
    DiagnosticRow f{"beta_factorization", 0, 0, 0, 0.0};
    for (const ChainDiagnostics& d : draws.diagnostics) {
        f.attempts += d.sweeps;
        f.skipped += d.factorization_failures;
    }
    f.accepted = f.attempts - f.skipped;
    f.acceptance_rate = f.attempts > 0 ? static_cast<double>(f.accepted) / static_cast<double>(f.attempts) : 0.0;
    rows.push_back(f);
    return rows;
}

csv::Table diagnostics_table(const std::vector<DiagnosticRow>& rows)
{
    csv::Table t;
    t.header = {"parameter", "attempts", "accepted", "skipped", "acceptance_rate"};
    for (const DiagnosticRow& r : rows) {
        t.rows.push_back({r.parameter, format_count(r.attempts), format_count(r.accepted), format_count(r.skipped),
                          format_number(r.acceptance_rate)});
    }
    return t;
}

std::vector<DiagnosticRow> read_diagnostics(const csv::Table& t)
{
    csv::require_header(t, {"parameter", "attempts", "accepted", "skipped", "acceptance_rate"}, "diagnostics");
    std::vector<DiagnosticRow> rows;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& f = t.rows[i];
        rows.push_back({f[0], csv::parse_count(f[1], i + 2, 2), csv::parse_count(f[2], i + 2, 3),
                        csv::parse_count(f[3], i + 2, 4), csv::parse_number(f[4], i + 2, 5)});
    }
    return rows;
}

csv::Table chains_table(const PosteriorDraws& draws, const data::Standardization& record)
{
    csv::Table t;
    t.header = {"chain", "draw"};
    t.header.insert(t.header.end(), record.names.begin(), record.names.end());
    t.header.push_back("sigma2");
    t.header.push_back("tau2");
    const double y_var = record.y_sd * record.y_sd;
    for (std::size_t i = 0; i < draws.rows(); ++i) {
        std::vector<std::string> row;
        const std::size_t per_chain = std::max<std::size_t>(draws.draws_per_chain, 1);
        row.push_back(format_count(i / per_chain + 1));
        row.push_back(format_count(i % per_chain + 1));
        for (std::size_t j = 0; j < draws.beta.cols(); ++j) {
            row.push_back(format_number(draws.beta(i, j) * record.y_sd / record.x_sd[j]));
        }
        row.push_back(format_number(draws.sigma2[i] * y_var));
        row.push_back(format_number(draws.tau2[i]));
        t.rows.push_back(std::move(row));
    }
    return t;
}

csv::Table study_table(const std::vector<sim::StudyRow>& rows)
{
    csv::Table t;
    t.header = {"scenario", "snr", "estimator", "replicates", "failures", "z0", "nz0", "oa"};
    for (const sim::StudyRow& r : rows) {
        t.rows.push_back({r.scenario, format_number(r.snr), r.estimator, format_count(r.replicates),
                          format_count(r.failures), format_number(r.z0), format_number(r.nz0),
                          format_number(r.oa)});
    }
    return t;
}

csv::Table timing_table(const std::vector<sim::StudyRow>& rows)
{
    csv::Table t;
    t.header = {"scenario", "snr", "estimator", "time_s"};
    for (const sim::StudyRow& r : rows) {
        t.rows.push_back({r.scenario, format_number(r.snr), r.estimator, format_number(r.time_s)});
    }
    return t;
}

std::vector<sim::StudyRow> read_study(const csv::Table& t)
{
    csv::require_header(t, {"scenario", "snr", "estimator", "replicates", "failures", "z0", "nz0", "oa"}, "study");
    std::vector<sim::StudyRow> rows;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& f = t.rows[i];
        sim::StudyRow r;
        r.scenario = f[0];
        r.snr = csv::parse_number(f[1], i + 2, 2);
        r.estimator = f[2];
        r.replicates = csv::parse_count(f[3], i + 2, 4);
        r.failures = csv::parse_count(f[4], i + 2, 5);
        r.z0 = csv::parse_number(f[5], i + 2, 6);
        r.nz0 = csv::parse_number(f[6], i + 2, 7);
        r.oa = csv::parse_number(f[7], i + 2, 8);
        rows.push_back(std::move(r));
    }
    return rows;
}

csv::Table histogram_table(const prior::Histogram& h)
{
    csv::Table t;
    t.header = {"bin_lower", "bin_upper", "mass", "density"};
    for (std::size_t k = 0; k < prior::Histogram::bins; ++k) {
        t.rows.push_back({format_number(h.edges[k]), format_number(h.edges[k + 1]), format_number(h.mass[k]),
                          format_number(h.density[k])});
    }
    return t;
}

prior::Histogram read_histogram(const csv::Table& t)
{
    csv::require_header(t, {"bin_lower", "bin_upper", "mass", "density"}, "histogram");
    if (t.rows.size() != prior::Histogram::bins) {
        throw DataError("histogram: expected " + std::to_string(prior::Histogram::bins) + " rows");
    }
    prior::Histogram h;
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
        const auto& f = t.rows[k];
        h.edges[k] = csv::parse_number(f[0], k + 2, 1);
        h.edges[k + 1] = csv::parse_number(f[1], k + 2, 2);
        h.mass[k] = csv::parse_number(f[2], k + 2, 3);
        h.density[k] = csv::parse_number(f[3], k + 2, 4);
    }
    return h;
}

csv::Table density_table(const std::vector<DensityRow>& rows, const std::string& variable)
{
    csv::Table t;
    t.header = {variable, "log_density", "density"};
    for (const DensityRow& r : rows) {
        t.rows.push_back({format_number(r.x), format_number(r.log_density), format_number(r.density)});
    }
    return t;
}

std::vector<DensityRow> read_density(const csv::Table& t)
{
    if (t.header.size() != 3 || t.header[1] != "log_density" || t.header[2] != "density") {
        throw DataError("density: expected header <variable>,log_density,density");
    }
    std::vector<DensityRow> rows;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& f = t.rows[i];
        rows.push_back({csv::parse_number(f[0], i + 2, 1), csv::parse_number(f[1], i + 2, 2),
                        csv::parse_number(f[2], i + 2, 3)});
    }
    return rows;
}

} // namespace grasp::report
