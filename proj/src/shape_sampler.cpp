#include <grasp/shape_sampler.hpp>
#include <grasp/specfun.hpp>

#include <algorithm>
#include <string>

namespace grasp::shape {

BetaSufficientStats BetaSufficientStats::from_unit_values(std::span<const double> x)
{
    BetaSufficientStats s;
    for (double v : x) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw DomainError("shape sampler: observation outside [0, 1]: " + std::to_string(v));
        }
        s.slogx += std::log(v + log_guard);
        s.slogcx += std::log(1.0 - v + log_guard);
    }
    s.n = x.size();
    return s;
}

namespace {

void accumulate_beta_prime(BetaSufficientStats& s, double lambda2)
{
    const double u = 1.0 / (1.0 + 1.0 / lambda2);
    const double cu = 1.0 / (1.0 + lambda2);
    s.slogx += std::log(u + log_guard);
    s.slogcx += std::log(cu + log_guard);
}

// −∂/∂s log p and −∂²/∂s² log p.
struct Derivatives
{
    double gradient;
    double hessian;
};

Derivatives negative_log_derivatives(double s, const ShapeTarget& t)
{
    const double n = static_cast<double>(t.n);
    const double s2 = 1.0 + s * s;
    return {
        n * (specfun::digamma(s) - specfun::digamma(s + t.other)) - t.log_sum + 2.0 * s / s2,
        n * (specfun::trigamma(s) - specfun::trigamma(s + t.other)) + 2.0 / s2
            - 4.0 * s * s / (s2 * s2),
    };
}

} // namespace

BetaSufficientStats BetaSufficientStats::from_beta_prime(std::span<const double> lambda2)
{
    BetaSufficientStats s;
    for (double v : lambda2) {
        accumulate_beta_prime(s, v);
    }
    s.n = lambda2.size();
    return s;
}

BetaSufficientStats BetaSufficientStats::from_beta_prime(std::span<const double> lambda2,
                                                         std::span<const std::size_t> indices)
{
    BetaSufficientStats s;
    for (std::size_t j : indices) {
        accumulate_beta_prime(s, lambda2[j]);
    }
    s.n = indices.size();
    return s;
}

ShapeTarget ShapeTarget::for_side(const BetaSufficientStats& stats, Side side, double other_shape)
{
    if (side == Side::a) {
        return {stats.slogx, stats.slogcx, other_shape, stats.n};
    }
    return {stats.slogcx, stats.slogx, other_shape, stats.n};
}

double log_conditional(double shape, const ShapeTarget& target)
{
    if (!(shape > 0.0)) {
        throw DomainError("log_conditional: shape must be positive, got " + std::to_string(shape));
    }
    const double data_term = target.n == 0
        ? 0.0
        : (shape - 1.0) * target.log_sum
              - static_cast<double>(target.n) * specfun::log_beta(shape, target.other);
    return data_term - std::log(shape * shape + 1.0);
}

double log_conditional_a(double a, const ShapeSamplerState& state)
{
    return log_conditional(a, state.target(Side::a));
}

DesignPoints find_mode_and_design_points(const ShapeTarget& target, const NewtonOptions& options)
{
    if (target.n == 0) {
        throw DomainError("find_mode_and_design_points: needs at least one observation");
    }
    const double n = static_cast<double>(target.n);
    const double mean_log = target.log_sum / n;
    const double mean_clog = target.complement_log_sum / n;
    double s = std::max(0.5 + mean_log / (2.0 * (1.0 - mean_log - mean_clog)), 1e-4);

    double rate = 1.0;
    bool converged = false;
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        const Derivatives d = negative_log_derivatives(s, target);
        double step;
        if (d.hessian > 0.0 && std::isfinite(d.hessian)) {
            step = d.gradient / d.hessian;
        } else {
            // Not locally convex: move geometrically downhill instead.
            step = d.gradient > 0.0 ? 0.5 * s : -s;
        }
        const double next = s - rate * step;
        if (!(next > 0.0) || !std::isfinite(next)) {
            rate *= options.step_decay;
            continue;
        }
        const double change = std::abs(next - s) / std::abs(s);
        s = next;
        if (change < options.relative_tolerance) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw ConvergenceError("mode search did not converge within "
                               + std::to_string(options.max_iterations) + " iterations");
    }
    const double h = negative_log_derivatives(s, target).hessian;
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw ConvergenceError("mode search ended at a point with non-positive curvature");
    }
    const double spread = std::sqrt(2.0 / h);
    return {std::max(s - spread, 0.5 * s), s, s + spread, h};
}

GammaProposal fit_gamma_natural(std::span<const double> points, std::span<const double> log_values)
{
    const std::size_t m = points.size();
    if (m < 3 || log_values.size() != m) {
        throw DegenerateDesignError("gamma fit needs at least three design points");
    }
    double mean_log = 0.0, mean_s = 0.0;
    for (double s : points) {
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw DegenerateDesignError("gamma fit: design point must be positive and finite");
        }
        mean_log += std::log(s);
        mean_s += s;
    }
    mean_log /= static_cast<double>(m);
    mean_s /= static_cast<double>(m);

    double s11 = 0.0, s12 = 0.0, s22 = 0.0, r1 = 0.0, r2 = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double c1 = std::log(points[j]) - mean_log;
        const double c2 = points[j] - mean_s;
        s11 += c1 * c1;
        s12 += c1 * c2;
        s22 += c2 * c2;
        r1 += c1 * log_values[j];
        r2 += c2 * log_values[j];
    }
    const double det = s11 * s22 - s12 * s12;
    if (!(det > 1e-14 * s11 * s22) || !std::isfinite(det)) {
        throw DegenerateDesignError("gamma fit: design points are collinear in (log s, s)");
    }
    const double eta1 = (s22 * r1 - s12 * r2) / det;
    const double eta2 = (s11 * r2 - s12 * r1) / det;
    const GammaProposal q{eta1 + 1.0, -1.0 / eta2};
    if (!(q.shape > 0.0) || !(q.scale > 0.0) || !std::isfinite(q.shape) || !std::isfinite(q.scale)) {
        throw InvalidProposalError("gamma fit produced shape " + std::to_string(q.shape)
                                   + ", scale " + std::to_string(q.scale));
    }
    return q;
}

GammaProposal fit_gamma_proposal(const DesignPoints& points, const ShapeTarget& target)
{
    const std::array<double, 3> s = points.points();
    std::array<double, 3> y{};
    for (std::size_t j = 0; j < 3; ++j) {
        y[j] = log_conditional(s[j], target);
    }
    return fit_gamma_natural(s, y);
}

MhOutcome mh_step(RngStream& rng, double current, const ShapeTarget& target, const NewtonOptions& options)
{
    GammaProposal q;
    try {
        q = fit_gamma_proposal(find_mode_and_design_points(target, options), target);
    } catch (const NumericalError&) {
        return {current, false, true, 0.0};
    }
    return independence_mh(rng, current, q, [&](double s) {
        return s > 0.0 ? log_conditional(s, target) : -INFINITY;
    });
}

MhOutcome mh_step(RngStream& rng, ShapeSamplerState& state, Side side, const NewtonOptions& options)
{
    const MhOutcome out = mh_step(rng, state.value(side), state.target(side), options);
    state.value(side) = out.value;
    return out;
}

ShapeChain gibbs_shape_pair(RngStream& rng, std::span<const double> x, const ShapeChainOptions& options)
{
    ShapeSamplerState state;
    state.stats = BetaSufficientStats::from_unit_values(x);
    if (state.stats.n == 0) {
        throw DomainError("gibbs_shape_pair: no observations");
    }
    for (std::size_t i = 0; i < options.warm_start_iterations; ++i) {
        for (Side side : {Side::a, Side::b}) {
            try {
                state.value(side) = find_mode_and_design_points(state.target(side), options.newton).mode;
            } catch (const NumericalError&) {
                // keep the previous value
            }
        }
    }
    ShapeChain chain;
    chain.a.reserve(options.sweeps);
    chain.b.reserve(options.sweeps);
    for (std::size_t i = 0; i < options.sweeps; ++i) {
        chain.a_acceptance.record(mh_step(rng, state, Side::a, options.newton));
        chain.b_acceptance.record(mh_step(rng, state, Side::b, options.newton));
        chain.a.push_back(state.a);
        chain.b.push_back(state.b);
    }
    return chain;
}

} // namespace grasp::shape
