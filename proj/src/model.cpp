#include "fwer/model.hpp"

#include <cmath>
#include <stdexcept>

#include "fwer/normal.hpp"

namespace fwer {

namespace {

void check_rho_closed(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::invalid_argument("ModelConfig: rho must lie in [0,1]");
}

void check_open_interval_rho(double rho, const char* who) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::domain_error(std::string(who) + ": defined for rho in (0,1) only");
}

}  // namespace

ModelConfig::ModelConfig(std::int64_t n, double rho, double alpha_n, double c)
    : n_(n), rho_(rho), alpha_n_(alpha_n), c_(c) {}

ModelConfig ModelConfig::from_per_test_level(std::int64_t n, double rho, double alpha_n) {
  if (n < 1) throw std::invalid_argument("ModelConfig: n must be >= 1");
  check_rho_closed(rho);
  if (!(alpha_n > 0.0 && alpha_n < 1.0))
    throw std::invalid_argument("ModelConfig: alpha_n must lie in (0,1)");
  return ModelConfig(n, rho, alpha_n, cutoff_from_level(alpha_n));
}

ModelConfig ModelConfig::from_cutoff(std::int64_t n, double rho, double c) {
  if (n < 1) throw std::invalid_argument("ModelConfig: n must be >= 1");
  check_rho_closed(rho);
  if (!std::isfinite(c)) throw std::invalid_argument("ModelConfig: cutoff must be finite");
  const double alpha_n = std_normal_tail(c);
  if (!(alpha_n > 0.0 && alpha_n < 1.0))
    throw std::invalid_argument("ModelConfig: cutoff leaves no representable tail mass");
  return ModelConfig(n, rho, alpha_n, c);
}

ModelConfig ModelConfig::bonferroni(std::int64_t n, double rho, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("ModelConfig: family level alpha must lie in (0,1)");
  if (n < 1) throw std::invalid_argument("ModelConfig: n must be >= 1");
  return from_per_test_level(n, rho, alpha / static_cast<double>(n));
}

ExchangeableRepresentation exchangeable_representation(const ModelConfig& config) {
  return {config.rho(), 1.0 - config.rho()};
}

double cutoff_from_level(double alpha_n) {
  if (!(alpha_n > 0.0 && alpha_n < 1.0))
    throw std::domain_error("cutoff_from_level: alpha_n must lie in (0,1)");
  // Phi^{-1}(1 - a) = -Phi^{-1}(a); the right-hand side keeps tail precision.
  return -std_normal_quantile(alpha_n);
}

double d_transform(double z, const ModelConfig& config) {
  const double rho = config.rho();
  if (rho >= 1.0)
    throw std::domain_error("d_transform: singular at rho = 1");
  return (config.cutoff() + std::sqrt(rho) * z) / std::sqrt(1.0 - rho);
}

double g_factor(double z, const ModelConfig& config) {
  const double rho = config.rho();
  check_open_interval_rho(rho, "g_factor");
  const double one_minus = 1.0 - rho;
  return (config.cutoff() + z / std::sqrt(rho)) /
         (2.0 * one_minus * std::sqrt(one_minus));
}

CoefficientBundle coefficients(double z, const ModelConfig& config, AForm form) {
  const double rho = config.rho();
  check_open_interval_rho(rho, "coefficients");
  CoefficientBundle out;
  out.d = d_transform(z, config);
  out.g = g_factor(z, config);
  out.alpha1 = std_normal_tail(out.d);
  const double cdf_d = std_normal_cdf(out.d);
  const double nm1 = static_cast<double>(config.n() - 1);
  out.a = form == AForm::cdf_at_d
              ? nm1 * std_normal_pdf(out.d) - out.d * cdf_d
              : nm1 * std_normal_pdf(out.d) - out.d * out.alpha1;
  out.b = (4.0 * rho - 1.0) * cdf_d / (2.0 * rho * (1.0 - rho));
  return out;
}

double t_factor(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::domain_error("t_factor: rho must lie in [0,1]");
  return 1.0 / (1.0 + std::sqrt(1.0 - rho));
}

double z0_solve(const ModelConfig& config) {
  const double rho = config.rho();
  check_open_interval_rho(rho, "z0_solve");
  if (config.n() < 2) throw std::domain_error("z0_solve: requires n >= 2");
  const double d_star = -std_normal_quantile(1.0 / static_cast<double>(config.n()));
  return (std::sqrt(1.0 - rho) * d_star - config.cutoff()) / std::sqrt(rho);
}

}  // namespace fwer
