#pragma once

namespace grasp::specfun {

/// ln Γ(x) for x > 0. Stirling series after upward recurrence past x = 15.
double log_gamma(double x);

/// ln B(a, b) = ln Γ(a) + ln Γ(b) − ln Γ(a + b).
double log_beta(double a, double b);

/// ψ(x), the logarithmic derivative of Γ, for x > 0.
double digamma(double x);

/// ψ'(x) for x > 0.
double trigamma(double x);

/// 1 / (1 + e^{-x}), evaluated without overflow for any finite x.
double logistic(double x);

/// log(logistic(x)) without cancellation in either tail.
double log_logistic(double x);

} // namespace grasp::specfun
