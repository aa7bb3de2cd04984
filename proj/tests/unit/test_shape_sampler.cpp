#include <doctest.h>

#include <grasp/random.hpp>
#include <grasp/shape_sampler.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace grasp::shape;
using grasp::RngStream;

namespace {

// Independent log B via the C library.
double oracle_log_beta(double a, double b)
{
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double oracle_log_conditional(double s, double log_sum, double other, double n)
{
    return (s - 1.0) * log_sum - n * oracle_log_beta(s, other) - std::log(s * s + 1.0);
}

double grid_argmax(const ShapeTarget& t, double lo, double hi, double step)
{
    double best = lo, best_v = -INFINITY;
    for (double s = lo; s <= hi; s += step) {
        const double v = oracle_log_conditional(s, t.log_sum, t.other, static_cast<double>(t.n));
        if (v > best_v) {
            best_v = v;
            best = s;
        }
    }
    return best;
}

std::vector<double> beta_sample(std::uint64_t seed, double a, double b, std::size_t n)
{
    RngStream rng(seed);
    std::vector<double> x(n);
    for (double& v : x) {
        v = grasp::random::draw_beta(rng, a, b);
    }
    return x;
}

struct JointMeans
{
    double a, b;
};

// Posterior means of (a, b) by 2-D quadrature of the joint log posterior on
// a log-spaced grid.
JointMeans quadrature_means(const BetaSufficientStats& s)
{
    const int m = 600;
    const double lo = std::log(1e-3), hi = std::log(50.0);
    const double h = (hi - lo) / m;
    std::vector<double> grid(m + 1);
    for (int i = 0; i <= m; ++i) {
        grid[i] = std::exp(lo + i * h);
    }
    std::vector<double> logp((m + 1) * (m + 1));
    double peak = -INFINITY;
    for (int i = 0; i <= m; ++i) {
        for (int j = 0; j <= m; ++j) {
            const double a = grid[i], b = grid[j];
            // density in (log a, log b) includes the Jacobian a·b
            const double v = (a - 1.0) * s.slogx + (b - 1.0) * s.slogcx
                - static_cast<double>(s.n) * oracle_log_beta(a, b) - std::log1p(a * a) - std::log1p(b * b)
                + std::log(a) + std::log(b);
            logp[i * (m + 1) + j] = v;
            peak = std::max(peak, v);
        }
    }
    double z = 0.0, ea = 0.0, eb = 0.0;
    for (int i = 0; i <= m; ++i) {
        for (int j = 0; j <= m; ++j) {
            const double w = std::exp(logp[i * (m + 1) + j] - peak);
            z += w;
            ea += w * grid[i];
            eb += w * grid[j];
        }
    }
    return {ea / z, eb / z};
}

double mean_of(const std::vector<double>& v, std::size_t skip = 0)
{
    double s = 0.0;
    for (std::size_t i = skip; i < v.size(); ++i) {
        s += v[i];
    }
    return s / static_cast<double>(v.size() - skip);
}

} // namespace

TEST_CASE("log conditional reference values")
{
    ShapeSamplerState empty;
    empty.a = 1.0;
    empty.b = 1.0;
    CHECK(log_conditional_a(1.0, empty) == doctest::Approx(-std::log(2.0)).epsilon(1e-14));

    ShapeSamplerState s;
    s.b = 3.0;
    s.stats.slogx = -10.0;
    s.stats.n = 20;
    const double expected = -10.0 - 20.0 * oracle_log_beta(2.0, 3.0) - std::log(5.0);
    CHECK(log_conditional_a(2.0, s) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::abs(expected - 38.089) < 1e-3);

    CHECK_THROWS_AS(log_conditional_a(0.0, s), grasp::DomainError);
    CHECK_THROWS_AS(log_conditional_a(-1.0, s), grasp::DomainError);
}

TEST_CASE("sufficient statistics and the beta prime bridge")
{
    const std::vector<double> x{0.2, 0.5, 0.9};
    const BetaSufficientStats s = BetaSufficientStats::from_unit_values(x);
    CHECK(s.n == 3);
    CHECK(s.slogx == doctest::Approx(std::log(0.2) + std::log(0.5) + std::log(0.9)).epsilon(1e-12));
    CHECK(s.slogcx == doctest::Approx(std::log(0.8) + std::log(0.5) + std::log(0.1)).epsilon(1e-12));

    std::vector<double> lambda2;
    for (double v : x) {
        lambda2.push_back(v / (1.0 - v));
    }
    const BetaSufficientStats t = BetaSufficientStats::from_beta_prime(lambda2);
    CHECK(t.slogx == doctest::Approx(s.slogx).epsilon(1e-12));
    CHECK(t.slogcx == doctest::Approx(s.slogcx).epsilon(1e-12));

    const std::vector<std::size_t> idx{0, 2};
    const BetaSufficientStats u = BetaSufficientStats::from_beta_prime(lambda2, idx);
    CHECK(u.n == 2);
    CHECK(u.slogx == doctest::Approx(std::log(0.2) + std::log(0.9)).epsilon(1e-12));

    // Extreme scales stay finite thanks to the guard.
    const std::vector<double> extreme{1e-320, 1e308};
    const BetaSufficientStats e = BetaSufficientStats::from_beta_prime(extreme);
    CHECK(std::isfinite(e.slogx));
    CHECK(std::isfinite(e.slogcx));
    CHECK_THROWS_AS(BetaSufficientStats::from_unit_values(std::vector<double>{1.5}), grasp::DomainError);
}

TEST_CASE("mode finder agrees with grid search")
{
    {
        const auto x = beta_sample(1, 2.0, 3.0, 10000);
        const BetaSufficientStats s = BetaSufficientStats::from_unit_values(x);
        const ShapeTarget t = ShapeTarget::for_side(s, Side::a, 3.0);
        const DesignPoints d = find_mode_and_design_points(t);
        const double grid = grid_argmax(t, 0.01, 20.0, 0.001);
        CHECK(std::abs(d.mode - grid) <= 0.05 * grid);
        CHECK(d.lower < d.mode);
        CHECK(d.mode < d.upper);
        CHECK(d.hessian_at_mode > 0.0);
        CHECK(d.lower == doctest::Approx(std::max(d.mode - std::sqrt(2.0 / d.hessian_at_mode), 0.5 * d.mode)));
        CHECK(d.upper == doctest::Approx(d.mode + std::sqrt(2.0 / d.hessian_at_mode)));
    }
    for (double c : {0.3, 1.0, 4.0}) {
        const auto x = beta_sample(2, c, c, 20000);
        const ShapeTarget t = ShapeTarget::for_side(BetaSufficientStats::from_unit_values(x), Side::a, c);
        CHECK(find_mode_and_design_points(t).mode == doctest::Approx(c).epsilon(0.08));
    }
    {
        const auto x = beta_sample(3, 5.0, 1.0, 2000);
        const ShapeTarget t = ShapeTarget::for_side(BetaSufficientStats::from_unit_values(x), Side::a, 1.0);
        CHECK(grid_argmax(t, 0.01, 50.0, 0.01) > 1.0);
        CHECK(find_mode_and_design_points(t).mode > 1.0);
    }
}

TEST_CASE("mode finder on 50 random configurations")
{
    RngStream rng(99);
    int agree = 0;
    for (int k = 0; k < 50; ++k) {
        const double a = 0.2 + 6.0 * rng.uniform();
        const double b = 0.2 + 6.0 * rng.uniform();
        const std::size_t n = 5 + static_cast<std::size_t>(2000.0 * rng.uniform());
        const auto x = beta_sample(1000 + k, a, b, n);
        const ShapeTarget t = ShapeTarget::for_side(BetaSufficientStats::from_unit_values(x), Side::a, b);
        const double grid = grid_argmax(t, 1e-3, 60.0, 1e-3);
        const double mode = find_mode_and_design_points(t).mode;
        INFO("a=" << a << " b=" << b << " n=" << n << " grid=" << grid << " newton=" << mode);
        CHECK(std::abs(mode - grid) <= 0.01 * grid + 1e-3);
        agree += std::abs(mode - grid) <= 0.01 * grid + 1e-3;
    }
    CHECK(agree == 50);
}

TEST_CASE("degenerate data terminates without NaN")
{
    std::vector<double> x(50, 1.0 - 2.220446049250313e-16);
    const BetaSufficientStats s = BetaSufficientStats::from_unit_values(x);
    const ShapeTarget t = ShapeTarget::for_side(s, Side::a, 1.0);
    try {
        const DesignPoints d = find_mode_and_design_points(t);
        CHECK(std::isfinite(d.mode));
        CHECK(d.mode > 0.0);
    } catch (const grasp::ConvergenceError&) {
        CHECK(true);  // reported instead of producing NaN
    }
    RngStream rng(1);
    const MhOutcome out = mh_step(rng, 1.0, t);
    CHECK(std::isfinite(out.value));
    CHECK(out.value > 0.0);
}

TEST_CASE("gamma natural-parameter fit")
{
    const GammaProposal truth{4.0, 0.5};
    const std::vector<double> pts{0.7, 1.9, 3.2};
    std::vector<double> y;
    for (double p : pts) {
        y.push_back(truth.log_kernel(p) + 12.3);  // constants do not matter
    }
    const GammaProposal q = fit_gamma_natural(pts, y);
    CHECK(q.shape == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(q.scale == doctest::Approx(0.5).epsilon(1e-8));

    // −(a − 3)² at (2, 3, 4): hand least squares on centred (log a, a).
    const std::vector<double> qp{2.0, 3.0, 4.0};
    const std::vector<double> qy{-1.0, 0.0, -1.0};
    const GammaProposal g = fit_gamma_natural(qp, qy);
    const double l1 = std::log(2.0), l2 = std::log(3.0), l3 = std::log(4.0);
    const double ml = (l1 + l2 + l3) / 3.0;
    const double c1[3] = {l1 - ml, l2 - ml, l3 - ml};
    const double c2[3] = {-1.0, 0.0, 1.0};
    double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0;
    for (int i = 0; i < 3; ++i) {
        s11 += c1[i] * c1[i];
        s12 += c1[i] * c2[i];
        s22 += c2[i] * c2[i];
        r1 += c1[i] * qy[i];
        r2 += c2[i] * qy[i];
    }
    const double det = s11 * s22 - s12 * s12;
    const double eta1 = (s22 * r1 - s12 * r2) / det, eta2 = (s11 * r2 - s12 * r1) / det;
    CHECK(g.shape == doctest::Approx(eta1 + 1.0).epsilon(1e-10));
    CHECK(g.scale == doctest::Approx(-1.0 / eta2).epsilon(1e-10));
    CHECK(g.mode() == doctest::Approx(3.0).epsilon(0.05));

    CHECK_THROWS_AS(fit_gamma_natural(std::vector<double>{1.0, 1.0, 1.0}, std::vector<double>{0.0, 0.0, 0.0}),
                    grasp::DegenerateDesignError);
    // Convex log target: η₂ > 0 ⇒ ω < 0.
    CHECK_THROWS_AS(fit_gamma_natural(qp, std::vector<double>{1.0, 0.0, 1.0}), grasp::InvalidProposalError);
}

TEST_CASE("proposal mean tracks the posterior mean")
{
    const auto x = beta_sample(21, 2.0, 5.0, 1000);
    const BetaSufficientStats s = BetaSufficientStats::from_unit_values(x);
    const JointMeans q = quadrature_means(s);
    const ShapeTarget t = ShapeTarget::for_side(s, Side::a, q.b);
    const GammaProposal g = fit_gamma_proposal(find_mode_and_design_points(t), t);
    CHECK(std::abs(g.mean() - q.a) <= 0.25 * q.a);
}

TEST_CASE("exact gamma target gives unit acceptance")
{
    const GammaProposal truth{3.5, 0.8};
    const std::vector<double> pts{1.0, 2.5, 4.0};
    std::vector<double> y;
    for (double p : pts) {
        y.push_back(truth.log_kernel(p));
    }
    const GammaProposal q = fit_gamma_natural(pts, y);
    RngStream rng(5);
    double current = 2.0;
    int accepted = 0;
    for (int i = 0; i < 10000; ++i) {
        const MhOutcome out = independence_mh(rng, current, q, [&](double s) { return truth.log_kernel(s); });
        CHECK(std::abs(out.log_ratio) < 1e-10);
        accepted += out.accepted;
        current = out.value;
    }
    CHECK(accepted == 10000);
}

TEST_CASE("independence MH leaves a 1-D target invariant")
{
    // Target: lognormal(0.3, 0.5²) restricted to (0, ∞); proposal a fixed gamma.
    auto log_target = [](double s) {
        const double z = (std::log(s) - 0.3) / 0.5;
        return -0.5 * z * z - std::log(s);
    };
    const GammaProposal q{4.0, 0.4};
    RngStream rng(17);
    double current = 1.0;
    std::vector<double> draws;
    for (int i = 0; i < 110000; ++i) {
        current = independence_mh(rng, current, q, log_target).value;
        if (i >= 10000) {
            draws.push_back(current);
        }
    }
    std::sort(draws.begin(), draws.end());
    // Lognormal CDF via erfc.
    double d = 0.0;
    for (std::size_t i = 0; i < draws.size(); i += 10) {
        const double cdf = 0.5 * std::erfc(-(std::log(draws[i]) - 0.3) / (0.5 * std::sqrt(2.0)));
        d = std::max(d, std::abs(cdf - (i + 0.5) / draws.size()));
    }
    CHECK(d < 0.02);
}

TEST_CASE("Beta(2,5): posterior means, quadrature agreement and acceptance")
{
    const auto x = beta_sample(2025, 2.0, 5.0, 1000);
    RngStream rng(3);
    ShapeChainOptions opt;
    opt.sweeps = 5000;
    const ShapeChain chain = gibbs_shape_pair(rng, x, opt);
    const double ma = mean_of(chain.a), mb = mean_of(chain.b);
    CHECK(ma >= 1.6);
    CHECK(ma <= 2.4);
    CHECK(mb >= 4.0);
    CHECK(mb <= 6.0);
    const JointMeans q = quadrature_means(BetaSufficientStats::from_unit_values(x));
    CHECK(std::abs(ma - q.a) <= 0.1 * q.a);
    CHECK(std::abs(mb - q.b) <= 0.1 * q.b);
    CHECK(chain.a_acceptance.rate() > 0.5);
    CHECK(chain.b_acceptance.rate() > 0.5);
}

TEST_CASE("posterior concentration for uniform and arcsine data")
{
    for (auto [c, lo, hi] : {std::tuple{1.0, 0.85, 1.15}, std::tuple{0.5, 0.4, 0.6}}) {
        const auto x = beta_sample(static_cast<std::uint64_t>(c * 10), c, c, 10000);
        RngStream rng(4);
        ShapeChainOptions opt;
        opt.sweeps = 2000;
        const ShapeChain chain = gibbs_shape_pair(rng, x, opt);
        INFO("c = " << c);
        CHECK(mean_of(chain.a) >= lo);
        CHECK(mean_of(chain.a) <= hi);
        CHECK(mean_of(chain.b) >= lo);
        CHECK(mean_of(chain.b) <= hi);
    }
}

TEST_CASE("single observation is prior dominated")
{
    RngStream rng(8);
    ShapeChainOptions opt;
    opt.sweeps = 4000;
    const ShapeChain chain = gibbs_shape_pair(rng, std::vector<double>{0.4}, opt);
    std::vector<double> a = chain.a;
    std::sort(a.begin(), a.end());
    CHECK(a[a.size() / 2] < 3.0);
    for (double v : chain.a) {
        REQUIRE((v > 0.0 && std::isfinite(v)));
    }
}

TEST_CASE("mirroring the data swaps the shapes")
{
    const auto x = beta_sample(31, 1.5, 4.0, 500);
    std::vector<double> mirrored;
    for (double v : x) {
        mirrored.push_back(1.0 - v);
    }
    ShapeChainOptions opt;
    opt.sweeps = 6000;
    RngStream r1(100), r2(200);
    ShapeChain c1 = gibbs_shape_pair(r1, x, opt);
    ShapeChain c2 = gibbs_shape_pair(r2, mirrored, opt);
    // Thin to reduce autocorrelation, then two-sample KS.
    std::vector<double> s1, s2;
    for (std::size_t i = 0; i < c1.a.size(); i += 10) {
        s1.push_back(c1.a[i]);
        s2.push_back(c2.b[i]);
    }
    std::sort(s1.begin(), s1.end());
    std::sort(s2.begin(), s2.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < s1.size() && j < s2.size()) {
        if (s1[i] <= s2[j]) {
            ++i;
        } else {
            ++j;
        }
        d = std::max(d, std::abs(static_cast<double>(i) / s1.size() - static_cast<double>(j) / s2.size()));
    }
    const double m = static_cast<double>(s1.size());
    CHECK(d < 1.628 * std::sqrt(2.0 / m));
}
