#pragma once

// Prior behaviour of the shrinkage hierarchy: densities of the local scale
// λ and of ξ = log λ, the Student-t marginal of β given ν, and the prior
// correlation between log effective scales δ_g λ_gi and δ_g λ_gj that share
// a group.

#include <grasp/random.hpp>

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace grasp::prior {

struct ShrinkagePriorKind
{
    enum class Family { lasso, student_t, horseshoe, beta_prime };

    Family family = Family::horseshoe;
    // student_t: λ² ~ IG(a, b); beta_prime: λ² ~ B′(a, b).
    double a = 0.5;
    double b = 0.5;

    static ShrinkagePriorKind lasso() { return {Family::lasso, 1.0, 1.0}; }
    /// Student-t with γ degrees of freedom: λ² ~ IG(γ/2, γ/2).
    static ShrinkagePriorKind student_t(double gamma) { return {Family::student_t, 0.5 * gamma, 0.5 * gamma}; }
    static ShrinkagePriorKind student_t(double a, double b) { return {Family::student_t, a, b}; }
    static ShrinkagePriorKind horseshoe() { return {Family::horseshoe, 0.5, 0.5}; }
    static ShrinkagePriorKind beta_prime(double a, double b) { return {Family::beta_prime, a, b}; }

    /// Throws DomainError when a parameter is not positive and finite.
    void validate() const;
};

/// (μ, ν) → (a, b) = (μν, (1 − μ)ν), for 0 < μ < 1 and ν > 0.
ShrinkagePriorKind beta_prime_from_mean_precision(double mu, double nu);

/// log π(λ):
///   lasso        2λ e^{−λ²}
///   student_t    (b^a / Γ(a)) 2 λ^{−2a−1} e^{−b/λ²}
///   horseshoe    2 / (π (1 + λ²))
///   beta_prime   2 λ^{2a−1} (1 + λ²)^{−a−b} / B(a, b)
double log_density_lambda(const ShrinkagePriorKind& kind, double lambda);

/// log π(ξ) for ξ = log λ; equals log_density_lambda(kind, e^ξ) + ξ.
/// The beta prime case is 2 σ(2ξ)^a σ(−2ξ)^b / B(a, b) with σ the logistic.
double log_density_xi(const ShrinkagePriorKind& kind, double xi);

/// p(β | τ², σ², ν, b) after integrating λ² ~ IG(b, 1/ν) out of
/// N(0, τ² λ² σ²):
///   √ν Γ(b + ½) / (√(2π σ² τ²) Γ(b)) · (1 + β² ν / (2 σ² τ²))^{−(b + ½)}
double student_t_marginal(double beta, double tau2, double sigma2, double nu, double b);

/// The same density by trapezoidal quadrature over t = log λ².
double student_t_marginal_quadrature(double beta, double tau2, double sigma2, double nu, double b,
                                     std::size_t nodes = 20001);

/// Var[log λ²] for λ² ~ B′(a, b): ψ′(a) + ψ′(b).
double log_variance_beta_prime(double a, double b);

/// (ψ′(a) + ψ′(b)) / (ψ′(a) + ψ′(b) + ψ′(a_g) + ψ′(b_g))
double corr_grasp(double a, double b, double a_g, double b_g);

/// ψ′(a_g) / (ψ′(a_g) + ψ′(b_g))
double corr_gigg(double a_g, double b_g);

enum class Family { grasp, gigg };

/// Shape tuple (a, b, a_g, b_g). GIGG only uses a_g and b_g.
struct CorrShapes
{
    double a = 0.5;
    double b = 0.5;
    double a_g = 0.5;
    double b_g = 0.5;
};

double corr_closed_form(Family family, const CorrShapes& shapes);

/// Sample correlation of log(δ² λ²_1) and log(δ² λ²_2) over independent
/// prior draws. GRASP: δ² ~ B′(a, b), λ² ~ B′(a_g, b_g). GIGG: δ² ~ Gamma(a_g, 1),
/// λ² ~ IG(b_g, 1). Requires draws ≥ 10⁴.
double corr_mc(RngStream& rng, Family family, const CorrShapes& shapes, std::size_t draws);

/// Prior for one shape hyperparameter: C⁺(0, scale), or c^{1/q} with c ~ C⁺(0, 1).
struct ShapeHyperprior
{
    enum class Kind { half_cauchy, root_half_cauchy };

    Kind kind = Kind::half_cauchy;
    double parameter = 1.0;  // scale, or q

    static ShapeHyperprior half_cauchy(double scale) { return {Kind::half_cauchy, scale}; }
    static ShapeHyperprior root_half_cauchy(double q) { return {Kind::root_half_cauchy, q}; }

    double draw(RngStream& rng) const;
};

struct HyperpriorScenario
{
    std::string label;
    // Priors for a, b, a_g, b_g in that order.
    std::array<ShapeHyperprior, 4> shapes{};
    std::size_t draws = 100000;

    void validate() const;

    /// The four configurations compared in the correlation study:
    ///   "a"  all C⁺(0, 1)
    ///   "b"  all q-th root of C⁺(0, 1), q = 10⁴
    ///   "c"  all C⁺(0, 25)
    ///   "d"  a and a_g q-th root, b and b_g C⁺(0, 1)
    static HyperpriorScenario named(const std::string& label, std::size_t draws = 100000);
};

struct Histogram
{
    static constexpr std::size_t bins = 50;

    std::array<double, bins + 1> edges{};
    std::array<double, bins> mass{};  // fraction of draws per bin
    std::array<double, bins> density{};  // mass / bin width

    double bin_width() const noexcept { return 1.0 / static_cast<double>(bins); }
    /// Bin index for r ∈ [0, 1]; r = 1 falls in the last bin.
    static std::size_t bin_of(double r) noexcept;
};

/// Histogram over [0, 1] of the closed-form correlation under shapes drawn
/// from the scenario. GIGG applies the scenario's a_g and b_g priors.
Histogram corr_distribution(RngStream& rng, const HyperpriorScenario& scenario, Family family);

} // namespace grasp::prior
