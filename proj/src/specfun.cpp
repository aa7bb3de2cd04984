#include <grasp/specfun.hpp>
#include <grasp/error.hpp>

#include <cmath>
#include <string>

namespace grasp::specfun {
namespace {

constexpr double stirling_threshold = 15.0;
constexpr double psi_threshold = 6.0;

void require_positive(double x, const char* name)
{
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError(std::string(name) + ": argument must be positive and finite, got "
                          + std::to_string(x));
    }
}

// ln Γ(x) for x >= stirling_threshold.
double stirling_log_gamma(double x)
{
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // Bernoulli terms B_2k / (2k (2k-1) x^(2k-1)), k = 1..7.
    const double series =
        inv * (1.0 / 12.0
        + inv2 * (-1.0 / 360.0
        + inv2 * (1.0 / 1260.0
        + inv2 * (-1.0 / 1680.0
        + inv2 * (1.0 / 1188.0
        + inv2 * (-691.0 / 360360.0
        + inv2 * (1.0 / 156.0)))))));
    constexpr double half_log_two_pi = 0.91893853320467274178;
    return (x - 0.5) * std::log(x) - x + half_log_two_pi + series;
}

} // namespace

double log_gamma(double x)
{
    require_positive(x, "log_gamma");
    if (x == 1.0 || x == 2.0) {
        return 0.0;
    }
    if (x >= stirling_threshold) {
        return stirling_log_gamma(x);
    }
    double product = 1.0;
    double shifted = x;
    while (shifted < stirling_threshold) {
        product *= shifted;
        shifted += 1.0;
    }
    return stirling_log_gamma(shifted) - std::log(product);
}

double log_beta(double a, double b)
{
    require_positive(a, "log_beta");
    require_positive(b, "log_beta");
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double digamma(double x)
{
    require_positive(x, "digamma");
    double shift = 0.0;
    while (x < psi_threshold) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    const double inv2 = 1.0 / (x * x);
    // Asymptotic expansion: ln x − 1/(2x) − Σ B_2k / (2k x^2k).
    const double series =
        inv2 * (1.0 / 12.0
        + inv2 * (-1.0 / 120.0
        + inv2 * (1.0 / 252.0
        + inv2 * (-1.0 / 240.0
        + inv2 * (1.0 / 132.0
        + inv2 * (-691.0 / 32760.0
        + inv2 * (1.0 / 12.0
        + inv2 * (-3617.0 / 8160.0))))))));
    return shift + std::log(x) - 0.5 / x - series;
}

double trigamma(double x)
{
    require_positive(x, "trigamma");
    double shift = 0.0;
    while (x < psi_threshold) {
        shift += 1.0 / (x * x);
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // 1/x + 1/(2x²) + Σ B_2k / x^(2k+1).
    const double series =
        inv * inv2 * (1.0 / 6.0
        + inv2 * (-1.0 / 30.0
        + inv2 * (1.0 / 42.0
        + inv2 * (-1.0 / 30.0
        + inv2 * (5.0 / 66.0
        + inv2 * (-691.0 / 2730.0
        + inv2 * (7.0 / 6.0
        + inv2 * (-3617.0 / 510.0))))))));
    return shift + inv + 0.5 * inv2 + series;
}

double logistic(double x)
{
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double log_logistic(double x)
{
    if (x >= 0.0) {
        return -std::log1p(std::exp(-x));
    }
    return x - std::log1p(std::exp(x));
}

} // namespace grasp::specfun
