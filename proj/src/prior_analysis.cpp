#include <grasp/prior_analysis.hpp>
#include <grasp/error.hpp>
#include <grasp/specfun.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace grasp::prior {
namespace {

void require_positive(double v, const char* what)
{
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError(std::string(what) + " must be positive and finite, got " + std::to_string(v));
    }
}

constexpr double log_two = std::numbers::ln2;

} // namespace

void ShrinkagePriorKind::validate() const
{
    if (family == Family::student_t || family == Family::beta_prime) {
        require_positive(a, "shape a");
        require_positive(b, "shape b");
    }
}

ShrinkagePriorKind beta_prime_from_mean_precision(double mu, double nu)
{
    if (!(mu > 0.0 && mu < 1.0)) {
        throw DomainError("mu must lie in (0, 1), got " + std::to_string(mu));
    }
    require_positive(nu, "nu");
    return ShrinkagePriorKind::beta_prime(mu * nu, (1.0 - mu) * nu);
}

double log_density_lambda(const ShrinkagePriorKind& kind, double lambda)
{
    kind.validate();
    require_positive(lambda, "lambda");
    const double l2 = lambda * lambda;
    switch (kind.family) {
    case ShrinkagePriorKind::Family::lasso:
        return log_two + std::log(lambda) - l2;
    case ShrinkagePriorKind::Family::student_t:
        return kind.a * std::log(kind.b) - specfun::log_gamma(kind.a) + log_two
            - (2.0 * kind.a + 1.0) * std::log(lambda) - kind.b / l2;
    case ShrinkagePriorKind::Family::horseshoe:
        return log_two - std::log(std::numbers::pi) - std::log1p(l2);
    case ShrinkagePriorKind::Family::beta_prime:
        return log_two + (2.0 * kind.a - 1.0) * std::log(lambda) - (kind.a + kind.b) * std::log1p(l2)
            - specfun::log_beta(kind.a, kind.b);
    }
    return 0.0;
}

double log_density_xi(const ShrinkagePriorKind& kind, double xi)
{
    kind.validate();
    if (!std::isfinite(xi)) {
        throw DomainError("xi must be finite");
    }
    switch (kind.family) {
    case ShrinkagePriorKind::Family::lasso:
        return log_two - std::exp(2.0 * xi) + 2.0 * xi;
    case ShrinkagePriorKind::Family::student_t:
        return kind.a * std::log(kind.b) - specfun::log_gamma(kind.a) + log_two - 2.0 * xi * kind.a
            - kind.b * std::exp(-2.0 * xi);
    case ShrinkagePriorKind::Family::horseshoe:
        // 2e^ξ / (π(1 + e^{2ξ})) = 1 / (π cosh ξ)
        return -std::log(std::numbers::pi) - (std::abs(xi) + std::log1p(std::exp(-2.0 * std::abs(xi))) - log_two);
    case ShrinkagePriorKind::Family::beta_prime:
        return log_two + kind.a * specfun::log_logistic(2.0 * xi) + kind.b * specfun::log_logistic(-2.0 * xi)
            - specfun::log_beta(kind.a, kind.b);
    }
    return 0.0;
}

double student_t_marginal(double beta, double tau2, double sigma2, double nu, double b)
{
    require_positive(tau2, "tau2");
    require_positive(sigma2, "sigma2");
    require_positive(nu, "nu");
    require_positive(b, "b");
    const double scale = sigma2 * tau2;
    const double log_value = 0.5 * std::log(nu) + specfun::log_gamma(b + 0.5)
        - 0.5 * std::log(2.0 * std::numbers::pi * scale) - specfun::log_gamma(b)
        - (b + 0.5) * std::log1p(beta * beta * nu / (2.0 * scale));
    return std::exp(log_value);
}

double student_t_marginal_quadrature(double beta, double tau2, double sigma2, double nu, double b,
                                     std::size_t nodes)
{
    require_positive(tau2, "tau2");
    require_positive(sigma2, "sigma2");
    require_positive(nu, "nu");
    require_positive(b, "b");
    if (nodes < 3) {
        throw DomainError("quadrature needs at least three nodes");
    }
    // Integrand in t = log λ²: N(β; 0, τ²σ² e^t) · IG(e^t; b, 1/ν) · e^t.
    const double scale = tau2 * sigma2;
    const double rate = 1.0 / nu;
    const double log_ig_const = b * std::log(rate) - specfun::log_gamma(b);
    auto log_integrand = [&](double t) {
        const double v = scale * std::exp(t);
        const double log_normal = -0.5 * std::log(2.0 * std::numbers::pi * v) - 0.5 * beta * beta / v;
        const double log_ig = log_ig_const - b * t - rate * std::exp(-t);
        return log_normal + log_ig;
    };
    // The IG factor pins the bulk near log(rate / b); put generous bounds on
    // both sides of it.
    const double centre = std::log(rate / b);
    const double lo = centre - 60.0 / std::min(1.0, b) - 10.0;
    const double hi = centre + 40.0;
    const double h = (hi - lo) / static_cast<double>(nodes - 1);
    double peak = -INFINITY;
    for (std::size_t i = 0; i < nodes; ++i) {
        peak = std::max(peak, log_integrand(lo + h * static_cast<double>(i)));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes; ++i) {
        const double w = (i == 0 || i + 1 == nodes) ? 0.5 : 1.0;
        sum += w * std::exp(log_integrand(lo + h * static_cast<double>(i)) - peak);
    }
    return std::exp(peak) * sum * h;
}

double log_variance_beta_prime(double a, double b)
{
    require_positive(a, "a");
    require_positive(b, "b");
    return specfun::trigamma(a) + specfun::trigamma(b);
}

double corr_grasp(double a, double b, double a_g, double b_g)
{
    const double group = log_variance_beta_prime(a, b);
    const double local = log_variance_beta_prime(a_g, b_g);
    return group / (group + local);
}

double corr_gigg(double a_g, double b_g)
{
    require_positive(a_g, "a_g");
    require_positive(b_g, "b_g");
    const double group = specfun::trigamma(a_g);
    return group / (group + specfun::trigamma(b_g));
}

double corr_closed_form(Family family, const CorrShapes& s)
{
    return family == Family::grasp ? corr_grasp(s.a, s.b, s.a_g, s.b_g) : corr_gigg(s.a_g, s.b_g);
}

double corr_mc(RngStream& rng, Family family, const CorrShapes& s, std::size_t draws)
{
    if (draws < 10000) {
        throw DomainError("corr_mc needs at least 10000 draws");
    }
    corr_closed_form(family, s);  // validates the shapes

    double mean1 = 0.0, mean2 = 0.0, c11 = 0.0, c22 = 0.0, c12 = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        double group, local1, local2;
        if (family == Family::grasp) {
            group = random::draw_log_beta_prime(rng, s.a, s.b);
            local1 = random::draw_log_beta_prime(rng, s.a_g, s.b_g);
            local2 = random::draw_log_beta_prime(rng, s.a_g, s.b_g);
        } else {
            group = random::draw_log_gamma(rng, s.a_g);
            local1 = -random::draw_log_gamma(rng, s.b_g);
            local2 = -random::draw_log_gamma(rng, s.b_g);
        }
        const double x1 = group + local1;
        const double x2 = group + local2;
        const double k = static_cast<double>(i + 1);
        const double d1 = x1 - mean1;
        const double d2 = x2 - mean2;
        mean1 += d1 / k;
        mean2 += d2 / k;
        c11 += d1 * (x1 - mean1);
        c22 += d2 * (x2 - mean2);
        c12 += d1 * (x2 - mean2);
    }
    return c12 / std::sqrt(c11 * c22);
}

double ShapeHyperprior::draw(RngStream& rng) const
{
    if (kind == Kind::half_cauchy) {
        return random::draw_half_cauchy(rng, parameter);
    }
    const double c = random::draw_half_cauchy(rng, 1.0);
    return std::exp(std::log(c) / parameter);
}

void HyperpriorScenario::validate() const
{
    for (const ShapeHyperprior& s : shapes) {
        if (s.kind == ShapeHyperprior::Kind::half_cauchy) {
            require_positive(s.parameter, "half-Cauchy scale");
        } else if (!(s.parameter >= 1.0) || !std::isfinite(s.parameter)) {
            throw DomainError("root order q must be at least 1");
        }
    }
    if (draws == 0) {
        throw DomainError("scenario needs at least one draw");
    }
}

HyperpriorScenario HyperpriorScenario::named(const std::string& label, std::size_t draws)
{
    const ShapeHyperprior unit = ShapeHyperprior::half_cauchy(1.0);
    const ShapeHyperprior root = ShapeHyperprior::root_half_cauchy(1e4);
    const ShapeHyperprior wide = ShapeHyperprior::half_cauchy(25.0);
    HyperpriorScenario s;
    s.label = label;
    s.draws = draws;
    if (label == "a") {
        s.shapes = {unit, unit, unit, unit};
    } else if (label == "b") {
        s.shapes = {root, root, root, root};
    } else if (label == "c") {
        s.shapes = {wide, wide, wide, wide};
    } else if (label == "d") {
        s.shapes = {root, unit, root, unit};
    } else {
        throw UsageError("unknown scenario '" + label + "' (expected a, b, c or d)");
    }
    return s;
}

std::size_t Histogram::bin_of(double r) noexcept
{
    const double scaled = std::clamp(r, 0.0, 1.0) * static_cast<double>(bins);
    return std::min(static_cast<std::size_t>(scaled), bins - 1);
}

Histogram corr_distribution(RngStream& rng, const HyperpriorScenario& scenario, Family family)
{
    scenario.validate();
    Histogram h;
    for (std::size_t i = 0; i <= Histogram::bins; ++i) {
        h.edges[i] = static_cast<double>(i) / static_cast<double>(Histogram::bins);
    }
    std::array<std::size_t, Histogram::bins> counts{};
    std::size_t used = 0;
    for (std::size_t i = 0; i < scenario.draws; ++i) {
        CorrShapes s;
        s.a = scenario.shapes[0].draw(rng);
        s.b = scenario.shapes[1].draw(rng);
        s.a_g = scenario.shapes[2].draw(rng);
        s.b_g = scenario.shapes[3].draw(rng);
        double r;
        try {
            r = corr_closed_form(family, s);
        } catch (const DomainError&) {
            continue;  // a shape draw overflowed to infinity
        }
        if (!std::isfinite(r)) {
            continue;
        }
        ++counts[Histogram::bin_of(r)];
        ++used;
    }
    for (std::size_t k = 0; k < Histogram::bins; ++k) {
        h.mass[k] = used > 0 ? static_cast<double>(counts[k]) / static_cast<double>(used) : 0.0;
        h.density[k] = h.mass[k] / h.bin_width();
    }
    return h;
}

} // namespace grasp::prior
