#pragma once

// Scalar primitives for the standard normal distribution. Everything here is
// pure and deterministic; tail quantities keep full relative accuracy down to
// the limit of double precision.

namespace fwer {

// N(0,1) density.
double std_normal_pdf(double x);

// P(Z <= x).
double std_normal_cdf(double x);

// P(Z > x). The far tail is evaluated by an asymptotic expansion rather than
// 1 - cdf, so relative accuracy is preserved for large x.
double std_normal_tail(double x);

// log P(Z <= x), absolute error <= 1e-12 for x >= -38. Safe for computing
// Phi(x)^n = exp(n * log_std_normal_cdf(x)) at large n.
double log_std_normal_cdf(double x);

// Inverse of std_normal_cdf on (0,1). Rational initial guess polished by one
// Newton step. Throws std::domain_error outside (0,1).
double std_normal_quantile(double p);

// The rational approximation alone (AS241, ~1 ulp), without the Newton
// polish; the per-draw workhorse of the Monte Carlo engine.
double std_normal_quantile_fast(double p);

// x * Phi(-x) / phi(x) for x > 0; strictly below 1, increasing toward 1.
// Throws std::domain_error for x <= 0.
double mills_ratio_check(double x);

}  // namespace fwer
