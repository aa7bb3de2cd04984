#pragma once

// Metropolis–Hastings updates for the two shape parameters of a Beta(a, b)
// likelihood under independent half-Cauchy C⁺(0, 1) priors.
//
// Each update fits a gamma proposal to the log conditional posterior: a
// Newton–Raphson search locates the mode, two more design points are placed
// one approximate posterior standard deviation either side of it, and the
// gamma natural parameters (k − 1, −1/ω) are recovered by least squares on
// the sufficient statistics (log s, s). The proposal is then used in an
// independence Metropolis–Hastings step.
//
// The b update is the a update applied to the mirrored data 1 − x, so every
// routine here is written once against a side-agnostic ShapeTarget.

#include <grasp/error.hpp>
#include <grasp/random.hpp>

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace grasp::shape {

/// Guard added inside both log accumulators so x = 0 or x = 1 stays finite.
inline constexpr double log_guard = 2.220446049250313e-16;

/// Σ log(x + eps), Σ log(1 − x + eps) and n for observations in [0, 1].
struct BetaSufficientStats
{
    double slogx = 0.0;
    double slogcx = 0.0;
    std::size_t n = 0;

    static BetaSufficientStats from_unit_values(std::span<const double> x);

    /// Maps beta prime draws λ² to u = λ²/(1 + λ²) ~ Beta(a, b) first.
    /// 1 − u is formed as 1/(1 + λ²) so neither tail cancels.
    static BetaSufficientStats from_beta_prime(std::span<const double> lambda2);

    /// Accumulates over the subset `indices` of `lambda2`.
    static BetaSufficientStats from_beta_prime(std::span<const double> lambda2,
                                               std::span<const std::size_t> indices);
};

enum class Side { a, b };

/// Conditional posterior of one shape parameter given the other.
/// log p(s | data, other) = (s − 1)·log_sum − n·log B(s, other) − log(s² + 1)
struct ShapeTarget
{
    double log_sum = 0.0;             // Σ log x (or Σ log(1 − x) for the b side)
    double complement_log_sum = 0.0;  // the other accumulator; used only for the initial guess
    double other = 1.0;               // the shape held fixed
    std::size_t n = 0;

    static ShapeTarget for_side(const BetaSufficientStats& stats, Side side, double other_shape);
};

struct ShapeSamplerState
{
    double a = 1.0;
    double b = 1.0;
    BetaSufficientStats stats;

    ShapeTarget target(Side side) const
    {
        return ShapeTarget::for_side(stats, side, side == Side::a ? b : a);
    }
    double& value(Side side) noexcept { return side == Side::a ? a : b; }
};

double log_conditional(double shape, const ShapeTarget& target);

/// `log_conditional` for the a side of `state`.
double log_conditional_a(double a, const ShapeSamplerState& state);

struct DesignPoints
{
    double lower = 0.0;
    double mode = 0.0;
    double upper = 0.0;
    double hessian_at_mode = 0.0;

    std::array<double, 3> points() const { return {lower, mode, upper}; }
};

struct NewtonOptions
{
    std::size_t max_iterations = 200;
    double relative_tolerance = 1e-3;
    double step_decay = 0.9;
};

/// Mode of the target by damped Newton–Raphson on −log p, plus the design
/// points (max(m − √(2/H), m/2), m, m + √(2/H)). Throws ConvergenceError if
/// the iteration cap is reached or the curvature at the end is not positive.
DesignPoints find_mode_and_design_points(const ShapeTarget& target, const NewtonOptions& options = {});

/// Gamma(k, ω) with density ∝ s^(k−1) e^(−s/ω).
struct GammaProposal
{
    double shape = 1.0;
    double scale = 1.0;

    /// Unnormalized log density; −∞ outside (0, ∞).
    double log_kernel(double s) const
    {
        if (!(s > 0.0)) {
            return -INFINITY;
        }
        return (shape - 1.0) * std::log(s) - s / scale;
    }
    double mean() const { return shape * scale; }
    double mode() const { return shape > 1.0 ? (shape - 1.0) * scale : 0.0; }
};

/// Least-squares fit of log-target values at distinct positive points onto
/// (log s, s) after column centering. Throws DegenerateDesignError for a
/// singular 2×2 system, InvalidProposalError if k ≤ 0 or ω ≤ 0.
GammaProposal fit_gamma_natural(std::span<const double> points, std::span<const double> log_values);

GammaProposal fit_gamma_proposal(const DesignPoints& points, const ShapeTarget& target);

struct MhOutcome
{
    double value = 0.0;
    bool accepted = false;
    bool skipped = false;   // proposal construction failed; value unchanged
    double log_ratio = 0.0;
};

/// Independence MH step from `current` with proposal `q` against an arbitrary
/// log target. Accepts with probability exp(min(0, Δ)).
template <class LogTarget>
MhOutcome independence_mh(RngStream& rng, double current, const GammaProposal& q, LogTarget&& log_target)
{
    const double proposed = random::draw_gamma(rng, q.shape, q.scale);
    const double log_ratio = (log_target(proposed) - log_target(current))
                           + (q.log_kernel(current) - q.log_kernel(proposed));
    MhOutcome out{current, false, false, log_ratio};
    const double u = rng.uniform();
    if (std::isfinite(log_ratio) && u < std::exp(std::min(0.0, log_ratio))) {
        out.value = proposed;
        out.accepted = true;
    }
    return out;
}

/// Refit the proposal to `target` and take one MH step from `current`.
/// Mode-finding or fitting failures are reported as a skip.
MhOutcome mh_step(RngStream& rng, double current, const ShapeTarget& target,
                  const NewtonOptions& options = {});

/// Updates `state.a` or `state.b` in place.
MhOutcome mh_step(RngStream& rng, ShapeSamplerState& state, Side side,
                  const NewtonOptions& options = {});

struct AcceptanceCounter
{
    std::size_t attempts = 0;
    std::size_t accepted = 0;
    std::size_t skipped = 0;

    void record(const MhOutcome& outcome) noexcept
    {
        if (outcome.skipped) {
            ++skipped;
        } else {
            ++attempts;
            accepted += outcome.accepted ? 1u : 0u;
        }
    }
    double rate() const noexcept
    {
        return attempts == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(attempts);
    }
};

struct ShapeChain
{
    std::vector<double> a;
    std::vector<double> b;
    AcceptanceCounter a_acceptance;
    AcceptanceCounter b_acceptance;
};

struct ShapeChainOptions
{
    std::size_t sweeps = 1000;
    std::size_t warm_start_iterations = 5;
    NewtonOptions newton;
};

/// Coordinate-wise mode search from a = b = 1 for `warm_start_iterations`
/// rounds, then `sweeps` alternating MH updates of a and b. Returns one
/// (a, b) pair per sweep.
ShapeChain gibbs_shape_pair(RngStream& rng, std::span<const double> x, const ShapeChainOptions& options);

} // namespace grasp::shape
