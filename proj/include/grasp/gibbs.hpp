#pragma once

// Gibbs sampler for grouped linear regression with beta prime priors on the
// local (λ²) and group (δ²) shrinkage scales and a half-Cauchy global scale:
//
//   y | β, σ²            ~ N(Xβ, σ² I)
//   β_gj | τ², δ²_g, λ²_gj, σ² ~ N(0, τ² λ²_gj δ²_g σ²)
//   λ²_gj | ν_gj ~ IG(b_g, 1/ν_gj),   ν_gj ~ IG(a_g, 1)
//   δ²_g  | ζ_g  ~ IG(b, 1/ζ_g),      ζ_g  ~ IG(a, 1)
//   τ² | ω ~ IG(1/2, 1/ω),            ω ~ IG(1/2, 1)
//
// Every conditional is derived from this joint, so the group scale δ²_g
// appears in the β precision, the λ² rate and the τ² rate alike.
//
// Ungrouped mode drops δ and ζ (δ² ≡ 1) and treats all predictors as one
// local-shape group.

#include <grasp/linalg.hpp>
#include <grasp/random.hpp>
#include <grasp/shape_sampler.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace grasp {

/// Predictors, response and group membership. `groups[j]` is the 0-based
/// group of column j; group ids must cover 0..G−1.
struct DesignData
{
    Matrix x;
    std::vector<double> y;
    std::vector<std::size_t> groups;

    std::size_t n() const noexcept { return x.rows(); }
    std::size_t p() const noexcept { return x.cols(); }
    std::size_t group_count() const;
    std::vector<std::size_t> group_sizes() const;
    std::vector<std::vector<std::size_t>> group_members() const;

    /// Throws DataError on inconsistent sizes or non-contiguous group ids.
    void validate() const;
};

enum class ShapeMode { fixed, learned, fixed_a_learn_b };

/// Beta prime shape pair handling. `a`, `b` are the fixed values, or the
/// starting values when learned.
struct ShapeSetting
{
    ShapeMode mode = ShapeMode::learned;
    double a = 0.5;
    double b = 0.5;

    static ShapeSetting fixed(double a, double b) { return {ShapeMode::fixed, a, b}; }
    static ShapeSetting learned(double a0 = 0.5, double b0 = 0.5) { return {ShapeMode::learned, a0, b0}; }
    /// a pinned (conventionally at 1/n), b learned.
    static ShapeSetting pinned_a(double a, double b0 = 0.5) { return {ShapeMode::fixed_a_learn_b, a, b0}; }

    bool learns_a() const noexcept { return mode == ShapeMode::learned; }
    bool learns_b() const noexcept { return mode != ShapeMode::fixed; }
};

struct HyperConfig
{
    bool grouped = true;
    /// One entry per group, or a single entry applied to every group.
    std::vector<ShapeSetting> local_shapes{ShapeSetting{}};
    ShapeSetting group_shapes{};

    std::size_t burnin = 1000;
    std::size_t samples = 1000;
    std::size_t thin = 1;
    std::size_t chains = 1;
    std::uint64_t seed = 1;
    std::size_t threads = 0;

    /// Optional proper IG(shape, rate) prior on σ²; zeros give the 1/σ² prior.
    double sigma2_prior_shape = 0.0;
    double sigma2_prior_rate = 0.0;

    shape::NewtonOptions newton{};

    void validate() const;
};

struct ShapePair
{
    double a = 0.5;
    double b = 0.5;
};

struct ChainState
{
    std::vector<double> beta;
    double sigma2 = 1.0;
    std::vector<double> lambda2;
    std::vector<double> nu;
    std::vector<double> delta2;
    std::vector<double> zeta;
    double tau2 = 1.0;
    double omega = 1.0;
    std::vector<ShapePair> local_shapes;
    ShapePair group_shapes;
};

struct ChainDiagnostics
{
    std::size_t sweeps = 0;
    std::size_t factorization_failures = 0;
    std::size_t degenerate_sigma_rate = 0;
    std::vector<shape::AcceptanceCounter> local_a;
    std::vector<shape::AcceptanceCounter> local_b;
    shape::AcceptanceCounter group_a;
    shape::AcceptanceCounter group_b;
};

class GibbsSampler
{
public:
    GibbsSampler(DesignData data, HyperConfig config);

    const DesignData& data() const noexcept { return data_; }
    const HyperConfig& config() const noexcept { return config_; }
    std::size_t shape_groups() const noexcept { return members_.size(); }
    std::size_t group_of(std::size_t j) const noexcept { return group_of_[j]; }

    /// β = 0, σ² = var(y), unit scales, shapes at their configured values.
    ChainState initial_state() const;

    /// Replaces y and the cached Xᵀy, yᵀy.
    void set_response(std::vector<double> y);

    void update_beta(RngStream& rng, ChainState& s) const;
    void update_sigma2(RngStream& rng, ChainState& s, ChainDiagnostics* diag = nullptr) const;
    void update_local_scales(RngStream& rng, ChainState& s) const;
    void update_group_scales(RngStream& rng, ChainState& s) const;
    void update_tau(RngStream& rng, ChainState& s) const;
    void update_shapes(RngStream& rng, ChainState& s, ChainDiagnostics* diag = nullptr) const;

    /// One full sweep. A failed β factorization keeps the previous β and is
    /// counted in `diag`.
    void sweep(RngStream& rng, ChainState& s, ChainDiagnostics& diag) const;

    ChainDiagnostics make_diagnostics() const;

    /// Draw every parameter from the prior (requires a proper σ² prior).
    /// Learned shapes are drawn from C⁺(0, 1).
    ChainState draw_prior_state(RngStream& rng) const;

    /// y ~ N(Xβ, σ² I) at the given state.
    std::vector<double> draw_response(RngStream& rng, const ChainState& s) const;

    /// Generic precision entries 1 / (τ² λ²_j δ²_g) (σ² excluded).
    std::vector<double> prior_precision(const ChainState& s) const;

private:
    ShapeSetting local_setting(std::size_t g) const;

    DesignData data_;
    HyperConfig config_;
    Matrix gram_;
    std::vector<double> xty_;
    std::vector<std::vector<std::size_t>> members_;  // local-shape groups
    std::vector<std::size_t> group_of_;
};

struct ParameterSummary
{
    double mean = 0.0;
    double sd = 0.0;
    double lower = 0.0;  // 2.5% quantile
    double upper = 0.0;  // 97.5% quantile
};

/// Mean, SD (n − 1) and the central 95% interval (linear-interpolated quantiles).
ParameterSummary summarize(std::span<const double> draws);

double quantile(std::vector<double> values, double q);

struct PosteriorDraws
{
    std::size_t chains = 0;
    std::size_t draws_per_chain = 0;
    Matrix beta;  // one row per kept draw, chains stacked in order
    std::vector<double> sigma2;
    std::vector<double> tau2;
    Matrix local_a;
    Matrix local_b;
    std::vector<double> group_a;
    std::vector<double> group_b;
    std::vector<ChainDiagnostics> diagnostics;
    std::vector<ParameterSummary> beta_summary;

    std::size_t rows() const noexcept { return beta.rows(); }
    std::vector<double> beta_mean() const;
    std::vector<double> column(const Matrix& m, std::size_t j) const;
};

/// Runs `config.chains` chains (in parallel), each with burnin
/// followed by `samples` sweeps of which every `thin`-th is kept.
/// Throws NumericalError when more than 1% of a chain's sweeps fail to
/// factor the β precision.
PosteriorDraws run_chain(const DesignData& data, const HyperConfig& config);

} // namespace grasp
