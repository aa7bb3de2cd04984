#pragma once

// Synthetic grouped-regression studies: block-correlated Gaussian designs,
// sparse group-structured coefficients, SNR-calibrated noise, and stratified
// squared-error metrics for several estimators.

#include <grasp/gibbs.hpp>
#include <grasp/linalg.hpp>
#include <grasp/random.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace grasp::sim {

/// Value rule for the active coefficients of one group.
struct CoefficientRule
{
    enum class Kind { none, constant, uniform_choice };

    Kind kind = Kind::none;
    std::vector<double> values;  // one value for constant, candidates for uniform_choice

    static CoefficientRule none() { return {}; }
    static CoefficientRule constant(double v) { return {Kind::constant, {v}}; }
    /// Each active coefficient is drawn with replacement from `v`.
    static CoefficientRule uniform(std::vector<double> v) { return {Kind::uniform_choice, std::move(v)}; }

    double draw(RngStream& rng) const;
    std::string to_string() const;
};

struct GroupSpec
{
    std::size_t size = 0;
    std::size_t active = 0;
    CoefficientRule rule;
};

enum class NoiseDefinition
{
    variance_ratio,   // σ² = βᵀΣβ / SNR
    amplitude_ratio,  // σ² = βᵀΣβ / SNR²
};

struct SimScenario
{
    std::string name;
    std::size_t n = 0;
    std::vector<GroupSpec> groups;
    double within_corr = 0.8;
    double across_corr = 0.2;
    double snr = 1.0;
    std::size_t replicates = 20;
    NoiseDefinition noise = NoiseDefinition::variance_ratio;

    std::size_t p() const;
    /// 0-based group index of every predictor, in column order.
    std::vector<std::size_t> group_index() const;
    void validate() const;

    /// concentrated, distributed, dense or half.
    static SimScenario named(const std::string& name, double snr = 1.0, std::size_t replicates = 20);
};

/// Unit diagonal, `within_corr` inside a group, `across_corr` elsewhere.
/// Throws FactorizationError if the result is not positive definite.
Matrix build_covariance(const SimScenario& scenario);

/// Noise variance for the scenario's SNR and noise definition.
double calibrate_noise(const SimScenario& scenario, std::span<const double> beta, const Matrix& sigma);

struct Replicate
{
    DesignData data;  // unstandardized X and y
    std::vector<double> truth;
    double sigma2 = 0.0;
};

/// Actives occupy the first k columns of each group. `sigma_factor` is the
/// Cholesky factor of build_covariance(scenario).
Replicate generate_replicate(RngStream& rng, const SimScenario& scenario, const Matrix& sigma_factor);
Replicate generate_replicate(RngStream& rng, const SimScenario& scenario);

struct MseReport
{
    double z0 = 0.0;   // Σ β̂² over truly null coefficients
    double nz0 = 0.0;  // Σ (β̂ − β)² over non-null coefficients
    double oa = 0.0;   // z0 + nz0
    double wall_time = 0.0;
};

MseReport evaluate(std::span<const double> estimate, std::span<const double> truth);

enum class Estimator { ols, rasp, grasp_fixed_a, grasp_learned };

/// "ols", "rasp", "grasp-a1n", "grasp"
std::string estimator_name(Estimator e);
Estimator parse_estimator(const std::string& name);
std::vector<Estimator> parse_estimator_list(const std::string& list);

struct SamplerSchedule
{
    std::size_t burnin = 2000;
    std::size_t samples = 2000;
    std::size_t thin = 1;
};

/// HyperConfig for a Bayesian estimator on data with n rows.
HyperConfig estimator_config(Estimator e, std::size_t n, const SamplerSchedule& schedule, std::uint64_t seed);

/// Coefficient estimate on the original data scale. Bayesian estimators
/// standardize, run one chain and return the de-standardized posterior mean.
std::vector<double> fit_estimator(Estimator e, const DesignData& raw, const SamplerSchedule& schedule,
                                  std::uint64_t seed);

struct StudyConfig
{
    std::vector<SimScenario> scenarios;
    std::vector<Estimator> estimators;
    SamplerSchedule schedule;
    std::uint64_t seed = 1;
    std::size_t threads = 0;
    /// Maximum fraction of aborted fits before the study fails.
    double failure_tolerance = 0.05;
};

struct StudyRow
{
    std::string scenario;
    double snr = 0.0;
    std::string estimator;
    std::size_t replicates = 0;  // successful fits
    std::size_t failures = 0;
    double z0 = 0.0;
    double nz0 = 0.0;
    double oa = 0.0;
    double time_s = 0.0;

    bool operator==(const StudyRow&) const = default;
};

/// One row per (scenario, estimator) in input order. Replicates run in
/// parallel; each owns a stream derived from (seed, scenario, replicate).
/// Throws NumericalError if more than `failure_tolerance` of all fits abort.
std::vector<StudyRow> run_study(const StudyConfig& config);

/// Plain-text scenario description, one `key: value` per line, '#' comments:
///   base: half            (optional, start from a named scenario)
///   name: custom
///   n: 200
///   snr: 0.2
///   replicates: 20
///   within_corr: 0.8
///   across_corr: 0.2
///   noise: variance | amplitude
///   group: 25 22 0.8       (size, active count, rule; repeatable)
///   group: 15 4 U(1,2,3,5)
///   group: 10 0 -
/// Any `group:` line replaces the base scenario's groups.
SimScenario parse_scenario(const std::string& text);
SimScenario read_scenario_file(const std::string& path);

} // namespace grasp::sim
