#include "fwer/normal.hpp"

#include <cfloat>
#include <cmath>
#include <stdexcept>

namespace fwer {

namespace {

constexpr double kInvSqrtTwoPi = 0.39894228040143267794;  // 1/sqrt(2*pi)
constexpr double kInvSqrtTwo = 0.70710678118654752440;
constexpr double kLogSqrtTwoPi = 0.91893853320467274178;  // log(sqrt(2*pi))

// Sum of the asymptotic expansion Phi(-x) = phi(x)/x * [1 - 1/x^2 + 3/x^4 - ...]
// (Abramowitz & Stegun 26.2.12). For x >= 10 the bracket reaches full double
// accuracy in at most ~17 terms; terms are added until they stop decreasing.
double tail_expansion_sum(double x) {
  const double xsq = x * x;
  double sum = 1.0;
  double i = 1.0, g = 1.0, a = DBL_MAX, lasta;
  do {
    lasta = a;
    const double p = (4.0 * i - 3.0) / xsq;
    const double q = p * ((4.0 * i - 1.0) / xsq);
    a = g * (p - q);
    sum -= a;
    g *= q;
    ++i;
    a = std::fabs(a);
  } while (lasta > a && a >= std::fabs(sum * DBL_EPSILON));
  return sum;
}

constexpr double kExpansionThreshold = 10.0;

// AS241 (Wichura): rational approximation to the normal quantile, accurate to
// about 1 ulp on its own; callers add a Newton polish where it matters.
double quantile_as241(double p) {
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
               1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
             1.3314166789178437745e+2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
               5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
             4.2313330701600911252e+1) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -value : value;
}

}  // namespace

double std_normal_pdf(double x) {
  if (std::isinf(x)) return 0.0;
  const double ax = std::fabs(x);
  if (ax < 5.0) return kInvSqrtTwoPi * std::exp(-0.5 * x * x);
  // Split ax = x1 + x2 with x1 a multiple of 2^-16 so x1*x1 is exact; keeps
  // the exponent argument accurate when -x^2/2 is large.
  const double x1 = std::floor(ax * 65536.0 + 0.5) * (1.0 / 65536.0);
  const double x2 = ax - x1;
  return kInvSqrtTwoPi * std::exp(-0.5 * x1 * x1) * std::exp((-0.5 * x2 - x1) * x2);
}

double std_normal_tail(double x) {
  if (std::isinf(x)) return x > 0.0 ? 0.0 : 1.0;
  if (x >= kExpansionThreshold)
    return std_normal_pdf(x) * (tail_expansion_sum(x) / x);
  if (x <= -kExpansionThreshold)
    return 1.0 - std_normal_pdf(x) * (tail_expansion_sum(-x) / -x);
  return 0.5 * std::erfc(x * kInvSqrtTwo);
}

double std_normal_cdf(double x) { return std_normal_tail(-x); }

double log_std_normal_cdf(double x) {
  if (std::isinf(x)) {
    if (x > 0.0) return 0.0;
    throw std::domain_error("log_std_normal_cdf: -infinity");
  }
  if (x >= -1.0) return std::log1p(-std_normal_tail(x));
  if (x > -37.0) return std::log(std_normal_cdf(x));
  // Below -37 the cdf approaches the subnormal range; evaluate the logarithm
  // of the asymptotic form directly.
  const double ax = -x;
  return -0.5 * x * x - std::log(ax) - kLogSqrtTwoPi + std::log(tail_expansion_sum(ax));
}

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("std_normal_quantile: p must lie strictly in (0,1)");
  double z = quantile_as241(p);
  if (p <= 0.5) {
    const double err = std_normal_tail(-z) - p;  // cdf(z) - p, z <= 0
    z -= err / std_normal_pdf(z);
  } else {
    const double pu = 1.0 - p;  // exact for p >= 0.5
    const double err = std_normal_tail(z) - pu;
    z += err / std_normal_pdf(z);
  }
  return z;
}

double std_normal_quantile_fast(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("std_normal_quantile_fast: p must lie strictly in (0,1)");
  return quantile_as241(p);
}

double mills_ratio_check(double x) {
  if (!(x > 0.0)) throw std::domain_error("mills_ratio_check: requires x > 0");
  if (x >= kExpansionThreshold) return tail_expansion_sum(x);
  return x * std_normal_tail(x) / std_normal_pdf(x);
}

}  // namespace fwer
