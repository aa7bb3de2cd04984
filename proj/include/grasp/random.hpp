#pragma once

#include <grasp/linalg.hpp>

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace grasp {

/// Seeded random stream. A stream is identified by a key path
/// (seed, child index, grandchild index, ...); the engine state is derived
/// from the whole path through std::seed_seq, so `child(i)` streams are
/// disjoint from each other and from their parent.
///
/// Single owner. Copying a stream duplicates its future draws.
class RngStream
{
public:
    explicit RngStream(std::uint64_t seed);

    RngStream child(std::uint64_t index) const;

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform();

    double normal();

    std::uint64_t seed() const noexcept { return key_.empty() ? 0 : key_.front(); }

private:
    explicit RngStream(std::vector<std::uint64_t> key);

    std::vector<std::uint64_t> key_;
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

namespace random {

/// log of a Gamma(shape, 1) variate. Exact in log space for any shape > 0,
/// including shapes far below 1 where the variate itself underflows.
double draw_log_gamma(RngStream& rng, double shape);

/// Gamma(shape, scale); clamped to the positive normal range of double.
double draw_gamma(RngStream& rng, double shape, double scale);

/// Inverse-gamma with density ∝ x^(−shape−1) e^(−rate/x).
double draw_inverse_gamma(RngStream& rng, double shape, double rate);

/// Beta(a, b) via the gamma-ratio construction; result in the open interval (0, 1).
double draw_beta(RngStream& rng, double a, double b);

/// log of a beta prime B′(a, b) variate: log G_a − log G_b.
double draw_log_beta_prime(RngStream& rng, double a, double b);

/// |Cauchy(0, scale)|
double draw_half_cauchy(RngStream& rng, double scale);

/// Draw from N(A⁻¹ m, s·A⁻¹) given the precision A, linear term m and scale s,
/// using one Cholesky factorization of A.
std::vector<double> draw_mvn_precision(RngStream& rng, const Matrix& precision,
                                       std::span<const double> linear_term, double scale);

/// Same, with a caller-supplied Cholesky factor of the precision.
std::vector<double> draw_mvn_precision_factored(RngStream& rng, const Matrix& lower,
                                                std::span<const double> linear_term,
                                                double scale);

} // namespace random
} // namespace grasp
