#include "fwer/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace fwer {

namespace {

void check_level(double a, const char* who) {
  if (!(a > 0.0 && a < 1.0))
    throw std::domain_error(std::string(who) + ": level must lie in (0,1)");
}

void check_rho_closed(double rho, const char* who) {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::domain_error(std::string(who) + ": rho must lie in [0,1]");
}

double pow_one_minus(double alpha_n, std::int64_t n) {
  return std::exp(static_cast<double>(n) * std::log1p(-alpha_n));
}

}  // namespace

double line_bound(double rho, std::int64_t n, double alpha_n) {
  check_rho_closed(rho, "line_bound");
  check_level(alpha_n, "line_bound");
  if (n < 1) throw std::domain_error("line_bound: n must be >= 1");
  return alpha_n + (1.0 - rho) * (1.0 - alpha_n - pow_one_minus(alpha_n, n));
}

SimplifiedBound simplified_bound(double rho, std::int64_t n, double alpha_n) {
  check_rho_closed(rho, "simplified_bound");
  check_level(alpha_n, "simplified_bound");
  if (n < 1) throw std::domain_error("simplified_bound: n must be >= 1");
  const double value =
      alpha_n * (static_cast<double>(n) - static_cast<double>(n - 1) * rho);
  return {value, value > 1.0};
}

double asymptotic_bound(double rho, double alpha) {
  check_rho_closed(rho, "asymptotic_bound");
  check_level(alpha, "asymptotic_bound");
  return alpha * (1.0 - rho);
}

BoundSet bound_set(double rho, std::int64_t n, double alpha_n) {
  BoundSet out;
  out.endpoint_rho0 = -std::expm1(static_cast<double>(n) * std::log1p(-alpha_n));
  out.endpoint_rho1 = alpha_n;
  out.line_value = line_bound(rho, n, alpha_n);
  out.simplified = simplified_bound(rho, n, alpha_n);
  out.asymptotic_value = static_cast<double>(n) * alpha_n * (1.0 - rho);
  return out;
}

double corrected_bonferroni_level(double alpha_target, double rho, std::int64_t n) {
  check_level(alpha_target, "corrected_bonferroni_level");
  if (!(rho >= 0.0 && rho < 1.0))
    throw std::domain_error(
        "corrected_bonferroni_level: rho must lie in [0,1); at rho = 1 every "
        "test is the same test, so use the family level directly");
  if (n < 1) throw std::domain_error("corrected_bonferroni_level: n must be >= 1");
  // line_bound is strictly increasing in the per-test level, the plain
  // Bonferroni level alpha_target/n is always feasible, and alpha_target
  // itself always violates or meets the target, so bisection brackets the
  // unique crossing.
  double lo = alpha_target / static_cast<double>(n);
  double hi = alpha_target;
  if (line_bound(rho, n, hi) <= alpha_target) return hi;
  while (hi - lo > 1e-12 * lo) {
    const double mid = 0.5 * (lo + hi);
    if (line_bound(rho, n, mid) <= alpha_target)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace fwer
