#pragma once

#include <cstdint>

// The equicorrelated one-sided testing model: n hypotheses, X_i ~ N(0,1) with
// Corr(X_i, X_j) = rho, H_{0i} rejected when X_i > c. Exchangeable form
// X_k = theta + Z_k with theta ~ N(0, rho), Z_k iid N(0, 1-rho).

namespace fwer {

class ModelConfig {
 public:
  // Per-test level alpha_n, cutoff derived as c = Phi^{-1}(1 - alpha_n).
  static ModelConfig from_per_test_level(std::int64_t n, double rho, double alpha_n);
  // Cutoff c, per-test level derived as alpha_n = Phi(-c).
  static ModelConfig from_cutoff(std::int64_t n, double rho, double c);
  // Bonferroni rule at family level alpha: alpha_n = alpha / n.
  static ModelConfig bonferroni(std::int64_t n, double rho, double alpha);

  std::int64_t n() const { return n_; }
  double rho() const { return rho_; }
  double alpha_n() const { return alpha_n_; }
  double cutoff() const { return c_; }

 private:
  ModelConfig(std::int64_t n, double rho, double alpha_n, double c);
  std::int64_t n_;
  double rho_;
  double alpha_n_;
  double c_;
};

struct ExchangeableRepresentation {
  double theta_variance;  // rho
  double z_variance;      // 1 - rho
};

ExchangeableRepresentation exchangeable_representation(const ModelConfig& config);

// The a coefficient of the second-derivative integrand appears in two
// variants; cdf_at_d is the one consistent with finite differences of H and
// with the large-d asymptote a ~ d(n*alpha1 - 1). It is the pinned default.
enum class AForm {
  cdf_at_d,   // a = (n-1) phi(d) - d Phi(d)
  tail_at_d,  // a = (n-1) phi(d) - d Phi(-d)
};

struct CoefficientBundle {
  double d;
  double g;
  double a;
  double b;
  double alpha1;  // Phi(-d)
};

// c = Phi^{-1}(1 - alpha_n), evaluated without forming 1 - alpha_n.
double cutoff_from_level(double alpha_n);

// d = (c + sqrt(rho) z) / sqrt(1 - rho). Requires rho < 1.
double d_transform(double z, const ModelConfig& config);

// G(rho, z) = dd/drho = [c + z/sqrt(rho)] / (2 (1-rho)^{3/2}). Requires
// rho strictly inside (0,1).
double g_factor(double z, const ModelConfig& config);

CoefficientBundle coefficients(double z, const ModelConfig& config,
                               AForm form = AForm::cdf_at_d);

// T(rho) = 1 / (1 + sqrt(1 - rho)), in [1/2, 1].
double t_factor(double rho);

// z0 with Phi(-d(z0)) = 1/n, i.e. z0 = (sqrt(1-rho) Phi^{-1}(1-1/n) - c)/sqrt(rho).
// Requires rho in (0,1) and n >= 2.
double z0_solve(const ModelConfig& config);

}  // namespace fwer
