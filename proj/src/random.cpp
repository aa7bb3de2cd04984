#include <grasp/random.hpp>
#include <grasp/error.hpp>
#include <grasp/specfun.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace grasp {
namespace {

std::mt19937_64 engine_from_key(const std::vector<std::uint64_t>& key)
{
    std::vector<std::uint32_t> words;
    words.reserve(2 * key.size() + 1);
    words.push_back(static_cast<std::uint32_t>(key.size()));
    for (std::uint64_t k : key) {
        words.push_back(static_cast<std::uint32_t>(k & 0xffffffffu));
        words.push_back(static_cast<std::uint32_t>(k >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

void require_positive(double value, const char* what)
{
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw DomainError(std::string(what) + " must be positive and finite, got "
                          + std::to_string(value));
    }
}

double clamp_exp(double log_value)
{
    static const double log_lo = std::log(std::numeric_limits<double>::min());
    static const double log_hi = std::log(std::numeric_limits<double>::max());
    if (log_value < log_lo) {
        return std::numeric_limits<double>::min();
    }
    if (log_value > log_hi) {
        return std::numeric_limits<double>::max();
    }
    return std::exp(log_value);
}

} // namespace

RngStream::RngStream(std::uint64_t seed) : RngStream(std::vector<std::uint64_t>{seed}) {}

RngStream::RngStream(std::vector<std::uint64_t> key)
    : key_(std::move(key)), engine_(engine_from_key(key_))
{
}

RngStream RngStream::child(std::uint64_t index) const
{
    std::vector<std::uint64_t> key = key_;
    key.push_back(index);
    return RngStream(std::move(key));
}

double RngStream::uniform()
{
    // (k + 0.5) / 2^53 for k uniform on [0, 2^53): never 0 or 1.
    const std::uint64_t k = engine_() >> 11;
    return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double RngStream::normal()
{
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    // Marsaglia polar method.
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    cached_normal_ = v * factor;
    has_cached_normal_ = true;
    return u * factor;
}

namespace random {

double draw_log_gamma(RngStream& rng, double shape)
{
    require_positive(shape, "gamma shape");
    if (shape < 1.0) {
        // G(shape) = G(shape + 1) · U^(1/shape), taken in log space.
        const double boosted = draw_log_gamma(rng, shape + 1.0);
        return boosted + std::log(rng.uniform()) / shape;
    }
    // Marsaglia–Tsang squeeze/rejection.
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) {
            return std::log(d) + std::log(v);
        }
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
            return std::log(d) + std::log(v);
        }
    }
}

double draw_gamma(RngStream& rng, double shape, double scale)
{
    require_positive(scale, "gamma scale");
    return clamp_exp(draw_log_gamma(rng, shape) + std::log(scale));
}

double draw_inverse_gamma(RngStream& rng, double shape, double rate)
{
    require_positive(rate, "inverse-gamma rate");
    return clamp_exp(std::log(rate) - draw_log_gamma(rng, shape));
}

double draw_beta(RngStream& rng, double a, double b)
{
    const double la = draw_log_gamma(rng, a);
    const double lb = draw_log_gamma(rng, b);
    const double x = specfun::logistic(la - lb);
    constexpr double lo = std::numeric_limits<double>::min();
    constexpr double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
    return std::min(std::max(x, lo), hi);
}

double draw_log_beta_prime(RngStream& rng, double a, double b)
{
    const double la = draw_log_gamma(rng, a);
    return la - draw_log_gamma(rng, b);
}

double draw_half_cauchy(RngStream& rng, double scale)
{
    require_positive(scale, "half-Cauchy scale");
    return scale * std::tan(0.5 * std::numbers::pi * rng.uniform());
}

std::vector<double> draw_mvn_precision_factored(RngStream& rng, const Matrix& lower,
                                                std::span<const double> linear_term,
                                                double scale)
{
    require_positive(scale, "normal scale");
    const std::size_t p = lower.rows();
    std::vector<double> w(linear_term.begin(), linear_term.end());
    linalg::solve_lower(lower, w);
    const double root = std::sqrt(scale);
    for (std::size_t i = 0; i < p; ++i) {
        w[i] += root * rng.normal();
    }
    // Lᵀ x = L⁻¹ m + √s z  ⇒  x = A⁻¹ m + √s L⁻ᵀ z.
    linalg::solve_lower_transpose(lower, w);
    return w;
}

std::vector<double> draw_mvn_precision(RngStream& rng, const Matrix& precision,
                                       std::span<const double> linear_term, double scale)
{
    return draw_mvn_precision_factored(rng, linalg::cholesky(precision), linear_term, scale);
}

} // namespace random
} // namespace grasp
