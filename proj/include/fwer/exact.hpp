#pragma once

#include <cstdint>
#include <vector>

#include "fwer/model.hpp"
#include "fwer/quadrature.hpp"

// Quadrature evaluation of H(rho) = E[Phi^n(d(Z))] = 1 - FWER(rho) and of its
// first two rho-derivatives, with the second derivative split into its three
// integrand terms. All integrands are assembled in log space so Phi^n never
// underflows; rho = 0 and rho = 1 take analytic branches.

namespace fwer {

struct ExactResult {
  double h = 0.0;
  double fwer = 0.0;
  double quad_error_estimate = 0.0;
  bool converged = false;
};

struct EngineValue {
  double value = 0.0;
  double quad_error_estimate = 0.0;
  bool converged = false;
};

struct SecondDerivativeBreakdown {
  double term1 = 0.0;  // a G^2 contribution
  double term2 = 0.0;  // b G contribution
  double term3 = 0.0;  // c Phi(d) / (4 rho (1-rho)^{3/2}) contribution
  double total = 0.0;
  double quad_error_estimate = 0.0;
  bool converged = false;
};

ExactResult h_exact(const ModelConfig& config, const QuadratureSpec& spec = {});

// H'(rho) = E[n Phi^{n-1}(d) phi(d) G(rho,Z)]. rho must lie in (0,1).
EngineValue h_prime(const ModelConfig& config, const QuadratureSpec& spec = {});

// H''(rho) = E[n Phi^{n-2}(d) phi(d) (a G^2 + b G + c Phi(d)/(4 rho (1-rho)^{3/2}))].
// rho must lie in (0,1).
SecondDerivativeBreakdown h_second(const ModelConfig& config,
                                   const QuadratureSpec& spec = {},
                                   AForm form = AForm::cdf_at_d);

// E[(n/2)(1-alpha1)^{n-2} phi(d) G^2 |a - d(n alpha1 - 1)|] with the residual
// written as (n-1)|phi(d) - d Phi(-d)|; nonnegative, vanishing as n grows.
EngineValue lemma2_residual(const ModelConfig& config, const QuadratureSpec& spec = {});

struct ConvexityRow {
  double rho = 0.0;
  double fwer = 0.0;
  double h_second_total = 0.0;
  int fwer_curvature_sign = 0;  // +1 when -h_second_total >= -sign_tolerance
  double sign_tolerance = 0.0;
  double quad_error_estimate = 0.0;
  bool converged = false;
};

// One row per grid point; engine failures mark the row instead of aborting.
std::vector<ConvexityRow> convexity_scan(std::int64_t n, double alpha,
                                         const std::vector<double>& rho_grid,
                                         const QuadratureSpec& spec = {});

struct AsymptoticRow {
  std::int64_t n = 0;
  double c = 0.0;
  double c_squared_over_log_n = 0.0;
  double mills_check = 0.0;        // c Phi(-c) / phi(c)
  double z0_plus_c_t = 0.0;        // z0 + c T(rho)
  double z0_plus_c_root_rho_t = 0.0;  // z0 + c sqrt(rho) T(rho); this one -> 0
};

// Bonferroni ladder alpha_n = alpha/n: cutoff growth, Mills convergence and
// the z0 transition location for each n.
std::vector<AsymptoticRow> asymptotic_diagnostics(const std::vector<std::int64_t>& n_list,
                                                  double alpha, double rho);

struct LemmaLadderRow {
  std::int64_t n = 0;
  double abs_term2 = 0.0;
  double abs_term3 = 0.0;
  double lemma2_residual = 0.0;
  bool converged = false;
};

std::vector<LemmaLadderRow> lemma_ladder(const std::vector<std::int64_t>& n_list,
                                         double alpha, double rho,
                                         const QuadratureSpec& spec = {});

}  // namespace fwer
