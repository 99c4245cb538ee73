#pragma once

#include <cstdint>

// Closed-form FWER bounds for the equicorrelated model and the inverse
// problem of picking a per-test level that meets a family target under a
// known correlation. All powers (1-a)^n go through log1p so per-test levels
// as small as 1e-9 keep full precision.

namespace fwer {

struct SimplifiedBound {
  double value = 0.0;
  bool exceeds_one = false;  // the linearized form is reported unclipped
};

struct BoundSet {
  double endpoint_rho0 = 0.0;    // 1 - (1-alpha_n)^n
  double endpoint_rho1 = 0.0;    // alpha_n
  double line_value = 0.0;       // chord between the two endpoints
  SimplifiedBound simplified;    // alpha_n [n - (n-1) rho]
  double asymptotic_value = 0.0; // alpha (1-rho) with alpha = n alpha_n
};

// alpha_n + (1-rho)[1 - alpha_n - (1-alpha_n)^n]; affine in rho, matching the
// rho = 0 and rho = 1 endpoints exactly.
double line_bound(double rho, std::int64_t n, double alpha_n);

SimplifiedBound simplified_bound(double rho, std::int64_t n, double alpha_n);

double asymptotic_bound(double rho, double alpha);

BoundSet bound_set(double rho, std::int64_t n, double alpha_n);

// Largest per-test level a* with line_bound(rho, n, a*) <= alpha_target,
// found by bisection to 1e-12 relative. Never smaller than alpha_target/n;
// equals the Sidak level at rho = 0 and approaches alpha_target as rho -> 1.
// Requires rho in [0,1).
double corrected_bonferroni_level(double alpha_target, double rho, std::int64_t n);

}  // namespace fwer
