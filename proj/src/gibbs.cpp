#include <grasp/gibbs.hpp>
#include <grasp/error.hpp>
#include <grasp/kernels.hpp>
#include <grasp/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace grasp {
namespace {

constexpr double max_precision = 1e300;

void check_shape_setting(const ShapeSetting& s, const char* where)
{
    if (!(s.a > 0.0) || !(s.b > 0.0) || !std::isfinite(s.a) || !std::isfinite(s.b)) {
        throw UsageError(std::string(where) + ": shape parameters must be positive");
    }
}

double sample_variance(std::span<const double> y)
{
    if (y.size() < 2) {
        return 1.0;
    }
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    double ss = 0.0;
    for (double v : y) {
        ss += (v - mean) * (v - mean);
    }
    return ss / static_cast<double>(y.size() - 1);
}

} // namespace

// ---------------------------------------------------------------- DesignData

std::size_t DesignData::group_count() const
{
    return groups.empty() ? 0 : *std::max_element(groups.begin(), groups.end()) + 1;
}

std::vector<std::size_t> DesignData::group_sizes() const
{
    std::vector<std::size_t> sizes(group_count(), 0);
    for (std::size_t g : groups) {
        ++sizes[g];
    }
    return sizes;
}

std::vector<std::vector<std::size_t>> DesignData::group_members() const
{
    std::vector<std::vector<std::size_t>> members(group_count());
    for (std::size_t j = 0; j < groups.size(); ++j) {
        members[groups[j]].push_back(j);
    }
    return members;
}

void DesignData::validate() const
{
    if (y.size() != x.rows()) {
        throw DataError("design: response length " + std::to_string(y.size())
                        + " does not match " + std::to_string(x.rows()) + " rows");
    }
    if (x.cols() == 0) {
        throw DataError("design: no predictors");
    }
    if (groups.size() != x.cols()) {
        throw DataError("design: every predictor needs a group assignment");
    }
    for (std::size_t size : group_sizes()) {
        if (size == 0) {
            throw DataError("design: group ids must be contiguous");
        }
    }
}

void HyperConfig::validate() const
{
    if (samples == 0 || thin == 0 || chains == 0) {
        throw UsageError("sampler: samples, thin and chains must be positive");
    }
    if (local_shapes.empty()) {
        throw UsageError("sampler: no local shape setting");
    }
    for (const ShapeSetting& s : local_shapes) {
        check_shape_setting(s, "local shapes");
    }
    check_shape_setting(group_shapes, "group shapes");
    if (sigma2_prior_shape < 0.0 || sigma2_prior_rate < 0.0) {
        throw UsageError("sampler: sigma2 prior parameters must be non-negative");
    }
}

// -------------------------------------------------------------- GibbsSampler

GibbsSampler::GibbsSampler(DesignData data, HyperConfig config)
    : data_(std::move(data)), config_(std::move(config))
{
    data_.validate();
    config_.validate();
    if (config_.grouped) {
        members_ = data_.group_members();
        group_of_ = data_.groups;
    } else {
        members_.assign(1, std::vector<std::size_t>(data_.p()));
        std::iota(members_[0].begin(), members_[0].end(), 0);
        group_of_.assign(data_.p(), 0);
    }
    if (config_.local_shapes.size() != 1 && config_.local_shapes.size() != members_.size()) {
        throw UsageError("sampler: need one local shape setting per group, or a single one");
    }
    gram_ = linalg::gram(data_.x);
    xty_ = linalg::transpose_multiply(data_.x, data_.y);
}

ShapeSetting GibbsSampler::local_setting(std::size_t g) const
{
    return config_.local_shapes.size() == 1 ? config_.local_shapes[0] : config_.local_shapes[g];
}

void GibbsSampler::set_response(std::vector<double> y)
{
    if (y.size() != data_.n()) {
        throw DataError("set_response: length mismatch");
    }
    data_.y = std::move(y);
    xty_ = linalg::transpose_multiply(data_.x, data_.y);
}

ChainState GibbsSampler::initial_state() const
{
    const std::size_t p = data_.p();
    const std::size_t groups = members_.size();
    ChainState s;
    s.beta.assign(p, 0.0);
    s.sigma2 = std::max(sample_variance(data_.y), std::numeric_limits<double>::min());
    s.lambda2.assign(p, 1.0);
    s.nu.assign(p, 1.0);
    s.delta2.assign(groups, 1.0);
    s.zeta.assign(groups, 1.0);
    s.tau2 = 1.0;
    s.omega = 1.0;
    s.local_shapes.resize(groups);
    for (std::size_t g = 0; g < groups; ++g) {
        const ShapeSetting setting = local_setting(g);
        s.local_shapes[g] = {setting.a, setting.b};
    }
    s.group_shapes = {config_.group_shapes.a, config_.group_shapes.b};
    return s;
}

ChainDiagnostics GibbsSampler::make_diagnostics() const
{
    ChainDiagnostics d;
    d.local_a.resize(members_.size());
    d.local_b.resize(members_.size());
    return d;
}

std::vector<double> GibbsSampler::prior_precision(const ChainState& s) const
{
    std::vector<double> d(data_.p());
    for (std::size_t j = 0; j < d.size(); ++j) {
        const double variance = s.tau2 * s.lambda2[j] * s.delta2[group_of_[j]];
        d[j] = variance > 0.0 ? std::min(1.0 / variance, max_precision) : max_precision;
    }
    return d;
}

void GibbsSampler::update_beta(RngStream& rng, ChainState& s) const
{
    Matrix a = gram_;
    const std::vector<double> d = prior_precision(s);
    for (std::size_t j = 0; j < d.size(); ++j) {
        a(j, j) += d[j];
    }
    linalg::cholesky_in_place(a);
    s.beta = random::draw_mvn_precision_factored(rng, a, xty_, s.sigma2);
}

void GibbsSampler::update_sigma2(RngStream& rng, ChainState& s, ChainDiagnostics* diag) const
{
    const std::size_t n = data_.n();
    const std::size_t p = data_.p();
    const std::vector<double> fitted = linalg::multiply(data_.x, s.beta);
    const double rss = kernels::squared_distance(data_.y, fitted);
    const double penalty = kernels::weighted_sum_squares(s.beta, prior_precision(s));
    const double shape = 0.5 * static_cast<double>(n + p) + config_.sigma2_prior_shape;
    double rate = 0.5 * (rss + penalty) + config_.sigma2_prior_rate;
    if (!(rate > 0.0)) {
        rate = std::numeric_limits<double>::epsilon();
        if (diag != nullptr) {
            ++diag->degenerate_sigma_rate;
        }
    }
    s.sigma2 = random::draw_inverse_gamma(rng, shape, rate);
}

void GibbsSampler::update_local_scales(RngStream& rng, ChainState& s) const
{
    const double base = 2.0 * s.tau2 * s.sigma2;
    for (std::size_t j = 0; j < data_.p(); ++j) {
        const std::size_t g = group_of_[j];
        const ShapePair& shapes = s.local_shapes[g];
        const double beta2 = s.beta[j] * s.beta[j];
        s.lambda2[j] = random::draw_inverse_gamma(
            rng, 0.5 + shapes.b, 1.0 / s.nu[j] + beta2 / (base * s.delta2[g]));
        s.nu[j] = random::draw_inverse_gamma(rng, shapes.a + shapes.b, 1.0 + 1.0 / s.lambda2[j]);
    }
}

void GibbsSampler::update_group_scales(RngStream& rng, ChainState& s) const
{
    if (!config_.grouped) {
        return;
    }
    const double base = 2.0 * s.tau2 * s.sigma2;
    const ShapePair& shapes = s.group_shapes;
    for (std::size_t g = 0; g < members_.size(); ++g) {
        double sum = 0.0;
        for (std::size_t j : members_[g]) {
            sum += s.beta[j] * s.beta[j] / s.lambda2[j];
        }
        const double shape = 0.5 * static_cast<double>(members_[g].size()) + shapes.b;
        s.delta2[g] = random::draw_inverse_gamma(rng, shape, 1.0 / s.zeta[g] + sum / base);
        s.zeta[g] = random::draw_inverse_gamma(rng, shapes.a + shapes.b, 1.0 + 1.0 / s.delta2[g]);
    }
}

void GibbsSampler::update_tau(RngStream& rng, ChainState& s) const
{
    // Σ β_j² / (λ²_j δ²_g) = τ² · Σ β_j² d_j with d the precision entries.
    std::vector<double> inv_local(data_.p());
    for (std::size_t j = 0; j < inv_local.size(); ++j) {
        inv_local[j] = 1.0 / (s.lambda2[j] * s.delta2[group_of_[j]]);
    }
    const double sum = kernels::weighted_sum_squares(s.beta, inv_local);
    const double shape = 0.5 * static_cast<double>(data_.p() + 1);
    s.tau2 = random::draw_inverse_gamma(rng, shape, 1.0 / s.omega + sum / (2.0 * s.sigma2));
    s.omega = random::draw_inverse_gamma(rng, 1.0, 1.0 + 1.0 / s.tau2);
}

void GibbsSampler::update_shapes(RngStream& rng, ChainState& s, ChainDiagnostics* diag) const
{
    using shape::Side;
    // The shape conditionals integrate out ν (resp. ζ); the mixing variables
    // are redrawn afterwards so the block (shapes, ν) | λ² stays exact.
    for (std::size_t g = 0; g < members_.size(); ++g) {
        const ShapeSetting setting = local_setting(g);
        if (!setting.learns_b()) {
            continue;
        }
        shape::ShapeSamplerState st;
        st.a = s.local_shapes[g].a;
        st.b = s.local_shapes[g].b;
        st.stats = shape::BetaSufficientStats::from_beta_prime(s.lambda2, members_[g]);
        if (setting.learns_a()) {
            const shape::MhOutcome out = shape::mh_step(rng, st, Side::a, config_.newton);
            if (diag != nullptr) {
                diag->local_a[g].record(out);
            }
        }
        const shape::MhOutcome out = shape::mh_step(rng, st, Side::b, config_.newton);
        if (diag != nullptr) {
            diag->local_b[g].record(out);
        }
        s.local_shapes[g] = {st.a, st.b};
        for (std::size_t j : members_[g]) {
            s.nu[j] = random::draw_inverse_gamma(rng, st.a + st.b, 1.0 + 1.0 / s.lambda2[j]);
        }
    }

    if (!config_.grouped || !config_.group_shapes.learns_b()) {
        return;
    }
    shape::ShapeSamplerState st;
    st.a = s.group_shapes.a;
    st.b = s.group_shapes.b;
    st.stats = shape::BetaSufficientStats::from_beta_prime(s.delta2);
    if (config_.group_shapes.learns_a()) {
        const shape::MhOutcome out = shape::mh_step(rng, st, Side::a, config_.newton);
        if (diag != nullptr) {
            diag->group_a.record(out);
        }
    }
    const shape::MhOutcome out = shape::mh_step(rng, st, Side::b, config_.newton);
    if (diag != nullptr) {
        diag->group_b.record(out);
    }
    s.group_shapes = {st.a, st.b};
    for (std::size_t g = 0; g < members_.size(); ++g) {
        s.zeta[g] = random::draw_inverse_gamma(rng, st.a + st.b, 1.0 + 1.0 / s.delta2[g]);
    }
}

void GibbsSampler::sweep(RngStream& rng, ChainState& s, ChainDiagnostics& diag) const
{
    try {
        update_beta(rng, s);
    } catch (const FactorizationError&) {
        ++diag.factorization_failures;
    }
    update_sigma2(rng, s, &diag);
    update_local_scales(rng, s);
    update_group_scales(rng, s);
    update_tau(rng, s);
    update_shapes(rng, s, &diag);
    ++diag.sweeps;
}

ChainState GibbsSampler::draw_prior_state(RngStream& rng) const
{
    if (!(config_.sigma2_prior_shape > 0.0) || !(config_.sigma2_prior_rate > 0.0)) {
        throw UsageError("draw_prior_state: needs a proper sigma2 prior");
    }
    auto draw_shapes = [&](const ShapeSetting& setting) {
        ShapePair pair{setting.a, setting.b};
        if (setting.learns_a()) {
            pair.a = random::draw_half_cauchy(rng, 1.0);
        }
        if (setting.learns_b()) {
            pair.b = random::draw_half_cauchy(rng, 1.0);
        }
        return pair;
    };

    ChainState s = initial_state();
    for (std::size_t g = 0; g < members_.size(); ++g) {
        s.local_shapes[g] = draw_shapes(local_setting(g));
    }
    if (config_.grouped) {
        s.group_shapes = draw_shapes(config_.group_shapes);
    }
    s.omega = random::draw_inverse_gamma(rng, 0.5, 1.0);
    s.tau2 = random::draw_inverse_gamma(rng, 0.5, 1.0 / s.omega);
    for (std::size_t g = 0; g < members_.size(); ++g) {
        if (config_.grouped) {
            s.zeta[g] = random::draw_inverse_gamma(rng, s.group_shapes.a, 1.0);
            s.delta2[g] = random::draw_inverse_gamma(rng, s.group_shapes.b, 1.0 / s.zeta[g]);
        }
        for (std::size_t j : members_[g]) {
            s.nu[j] = random::draw_inverse_gamma(rng, s.local_shapes[g].a, 1.0);
            s.lambda2[j] = random::draw_inverse_gamma(rng, s.local_shapes[g].b, 1.0 / s.nu[j]);
        }
    }
    s.sigma2 = random::draw_inverse_gamma(rng, config_.sigma2_prior_shape, config_.sigma2_prior_rate);
    for (std::size_t j = 0; j < data_.p(); ++j) {
        const double variance = s.tau2 * s.lambda2[j] * s.delta2[group_of_[j]] * s.sigma2;
        s.beta[j] = std::sqrt(variance) * rng.normal();
    }
    return s;
}

std::vector<double> GibbsSampler::draw_response(RngStream& rng, const ChainState& s) const
{
    std::vector<double> y = linalg::multiply(data_.x, s.beta);
    const double sd = std::sqrt(s.sigma2);
    for (double& v : y) {
        v += sd * rng.normal();
    }
    return y;
}

// ----------------------------------------------------------------- summaries

double quantile(std::vector<double> values, double q)
{
    if (values.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

ParameterSummary summarize(std::span<const double> draws)
{
    ParameterSummary out;
    if (draws.empty()) {
        return out;
    }
    const double n = static_cast<double>(draws.size());
    out.mean = std::accumulate(draws.begin(), draws.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : draws) {
        ss += (v - out.mean) * (v - out.mean);
    }
    out.sd = draws.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    std::vector<double> sorted(draws.begin(), draws.end());
    out.lower = quantile(sorted, 0.025);
    out.upper = quantile(std::move(sorted), 0.975);
    return out;
}

std::vector<double> PosteriorDraws::column(const Matrix& m, std::size_t j) const
{
    std::vector<double> out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out[i] = m(i, j);
    }
    return out;
}

std::vector<double> PosteriorDraws::beta_mean() const
{
    std::vector<double> mean(beta.cols());
    for (std::size_t j = 0; j < mean.size(); ++j) {
        mean[j] = beta_summary.size() == mean.size() ? beta_summary[j].mean : summarize(column(beta, j)).mean;
    }
    return mean;
}

// ------------------------------------------------------------------ run_chain

PosteriorDraws run_chain(const DesignData& data, const HyperConfig& config)
{
    const GibbsSampler sampler(data, config);
    const std::size_t p = data.p();
    const std::size_t groups = sampler.shape_groups();
    const std::size_t kept = config.samples / config.thin;
    const std::size_t total_sweeps = config.burnin + config.samples;
    const std::size_t failure_budget = total_sweeps / 100;

    PosteriorDraws out;
    out.chains = config.chains;
    out.draws_per_chain = kept;
    out.beta = Matrix(kept * config.chains, p);
    out.sigma2.assign(kept * config.chains, 0.0);
    out.tau2.assign(kept * config.chains, 0.0);
    out.local_a = Matrix(kept * config.chains, groups);
    out.local_b = Matrix(kept * config.chains, groups);
    out.group_a.assign(kept * config.chains, 0.0);
    out.group_b.assign(kept * config.chains, 0.0);
    out.diagnostics.resize(config.chains);

    const RngStream master(config.seed);
    parallel_for(config.chains, worker_count(config.threads), [&](std::size_t c) {
        RngStream rng = master.child(c);
        ChainState state = sampler.initial_state();
        ChainDiagnostics diag = sampler.make_diagnostics();
        std::size_t row = c * kept;
        for (std::size_t it = 0; it < total_sweeps; ++it) {
            sampler.sweep(rng, state, diag);
            if (diag.factorization_failures > failure_budget) {
                throw NumericalError("chain " + std::to_string(c) + ": "
                                     + std::to_string(diag.factorization_failures)
                                     + " beta factorization failures in " + std::to_string(it + 1)
                                     + " sweeps (more than 1%)");
            }
            if (it < config.burnin) {
                continue;
            }
            const std::size_t k = it - config.burnin + 1;
            if (k % config.thin != 0 || row >= (c + 1) * kept) {
                continue;
            }
            std::copy(state.beta.begin(), state.beta.end(), out.beta.row(row).begin());
            out.sigma2[row] = state.sigma2;
            out.tau2[row] = state.tau2;
            for (std::size_t g = 0; g < groups; ++g) {
                out.local_a(row, g) = state.local_shapes[g].a;
                out.local_b(row, g) = state.local_shapes[g].b;
            }
            out.group_a[row] = state.group_shapes.a;
            out.group_b[row] = state.group_shapes.b;
            ++row;
        }
        out.diagnostics[c] = std::move(diag);
    });

    out.beta_summary.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        out.beta_summary[j] = summarize(out.column(out.beta, j));
    }
    return out;
}

} // namespace grasp
