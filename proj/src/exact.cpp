#include "fwer/exact.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "fwer/normal.hpp"

namespace fwer {

namespace {

constexpr double kLogSqrtTwoPi = 0.91893853320467274178;
constexpr double kZCut = 12.0;  // phi mass outside [-12,12] is below 1e-30

double log_pdf(double x) { return -0.5 * x * x - kLogSqrtTwoPi; }

void require_open_rho(const ModelConfig& config, const char* who) {
  if (!(config.rho() > 0.0 && config.rho() < 1.0))
    throw std::domain_error(std::string(who) + ": rho must lie strictly in (0,1)");
}

// Evaluates one expectation E[f(Z)] with the method selected by the spec.
// gauss_hermite refines node_count -> 2*node_count+1 and uses the change as
// the error estimate; adaptive integrates f(z) phi(z) on [-12,12].
EngineValue expectation(const std::function<double(double)>& f,
                        const QuadratureSpec& spec) {
  spec.validate();
  EngineValue out;
  if (spec.method == QuadMethod::gauss_hermite) {
    const double coarse = gauss_hermite_expectation(f, spec.node_count);
    const double fine = gauss_hermite_expectation(f, 2 * spec.node_count + 1);
    out.value = fine;
    out.quad_error_estimate = std::fabs(coarse - fine) +
                              4.0 * std::numeric_limits<double>::epsilon() *
                                  (1.0 + std::fabs(fine));
    out.converged = out.quad_error_estimate <=
                    std::max(spec.abs_tol, spec.rel_tol * std::fabs(fine));
  } else {
    const QuadResult r = integrate_adaptive(
        [&f](double z) { return f(z) * std_normal_pdf(z); }, -kZCut, kZCut,
        spec.abs_tol, spec.rel_tol, spec.max_subdivisions);
    out.value = r.value;
    out.quad_error_estimate = r.error_estimate;
    out.converged = r.converged;
  }
  return out;
}

}  // namespace

ExactResult h_exact(const ModelConfig& config, const QuadratureSpec& spec) {
  spec.validate();
  const double alpha_n = config.alpha_n();
  const auto n = static_cast<double>(config.n());
  ExactResult out;
  if (config.rho() == 0.0) {
    out.h = std::exp(n * std::log1p(-alpha_n));
    out.fwer = -std::expm1(n * std::log1p(-alpha_n));
    out.quad_error_estimate = 0.0;
    out.converged = true;
    return out;
  }
  if (config.rho() == 1.0) {
    out.h = 1.0 - alpha_n;
    out.fwer = alpha_n;
    out.quad_error_estimate = 0.0;
    out.converged = true;
    return out;
  }
  const double c = config.cutoff();
  const double sr = std::sqrt(config.rho());
  const double s1r = std::sqrt(1.0 - config.rho());
  const EngineValue v = expectation(
      [n, c, sr, s1r](double z) {
        return std::exp(n * log_std_normal_cdf((c + sr * z) / s1r));
      },
      spec);
  out.h = std::clamp(v.value, 0.0, 1.0);
  out.fwer = 1.0 - out.h;
  out.quad_error_estimate = v.quad_error_estimate;
  out.converged = v.converged;
  return out;
}

EngineValue h_prime(const ModelConfig& config, const QuadratureSpec& spec) {
  require_open_rho(config, "h_prime");
  const double c = config.cutoff();
  const double rho = config.rho();
  const auto n = static_cast<double>(config.n());
  const double sr = std::sqrt(rho);
  const double s1r = std::sqrt(1.0 - rho);
  const double g_scale = 1.0 / (2.0 * (1.0 - rho) * s1r);
  return expectation(
      [n, c, sr, s1r, g_scale](double z) {
        const double d = (c + sr * z) / s1r;
        const double g = (c + z / sr) * g_scale;
        return std::exp(std::log(n) + (n - 1.0) * log_std_normal_cdf(d) + log_pdf(d)) * g;
      },
      spec);
}

SecondDerivativeBreakdown h_second(const ModelConfig& config,
                                   const QuadratureSpec& spec, AForm form) {
  require_open_rho(config, "h_second");
  const double c = config.cutoff();
  const double rho = config.rho();
  const auto n = static_cast<double>(config.n());
  const double sr = std::sqrt(rho);
  const double s1r = std::sqrt(1.0 - rho);
  const double g_scale = 1.0 / (2.0 * (1.0 - rho) * s1r);
  const double b_scale = (4.0 * rho - 1.0) / (2.0 * rho * (1.0 - rho));
  const double t3_scale = c / (4.0 * rho * (1.0 - rho) * s1r);

  // base(z) = n Phi^{n-2}(d) phi(d) phi-weighted expectation factor
  const auto base_and_geometry = [=](double z, double& g, double& log_cdf_d,
                                     double& d) {
    d = (c + sr * z) / s1r;
    g = (c + z / sr) * g_scale;
    log_cdf_d = log_std_normal_cdf(d);
    return std::exp(std::log(n) + (n - 2.0) * log_cdf_d + log_pdf(d));
  };

  const EngineValue t1 = expectation(
      [=](double z) {
        double g, lc, d;
        const double base = base_and_geometry(z, g, lc, d);
        const double cdf_d = std::exp(lc);
        const double a = form == AForm::cdf_at_d
                             ? (n - 1.0) * std_normal_pdf(d) - d * cdf_d
                             : (n - 1.0) * std_normal_pdf(d) - d * std_normal_tail(d);
        return base * a * g * g;
      },
      spec);
  const EngineValue t2 = expectation(
      [=](double z) {
        double g, lc, d;
        const double base = base_and_geometry(z, g, lc, d);
        return base * b_scale * std::exp(lc) * g;
      },
      spec);
  const EngineValue t3 = expectation(
      [=](double z) {
        double g, lc, d;
        const double base = base_and_geometry(z, g, lc, d);
        return base * t3_scale * std::exp(lc);
      },
      spec);

  SecondDerivativeBreakdown out;
  out.term1 = t1.value;
  out.term2 = t2.value;
  out.term3 = t3.value;
  out.total = t1.value + t2.value + t3.value;
  out.quad_error_estimate =
      t1.quad_error_estimate + t2.quad_error_estimate + t3.quad_error_estimate;
  out.converged = t1.converged && t2.converged && t3.converged;
  return out;
}

EngineValue lemma2_residual(const ModelConfig& config, const QuadratureSpec& spec) {
  require_open_rho(config, "lemma2_residual");
  const double c = config.cutoff();
  const double rho = config.rho();
  const auto n = static_cast<double>(config.n());
  const double sr = std::sqrt(rho);
  const double s1r = std::sqrt(1.0 - rho);
  const double g_scale = 1.0 / (2.0 * (1.0 - rho) * s1r);
  return expectation(
      [=](double z) {
        const double d = (c + sr * z) / s1r;
        const double g = (c + z / sr) * g_scale;
        const double lc = log_std_normal_cdf(d);
        const double base =
            std::exp(std::log(0.5 * n) + (n - 2.0) * lc + log_pdf(d));
        const double gap =
            (n - 1.0) * std::fabs(std_normal_pdf(d) - d * std_normal_tail(d));
        return base * g * g * gap;
      },
      spec);
}

std::vector<ConvexityRow> convexity_scan(std::int64_t n, double alpha,
                                         const std::vector<double>& rho_grid,
                                         const QuadratureSpec& spec) {
  if (rho_grid.empty())
    throw std::invalid_argument("convexity_scan: rho grid must not be empty");
  std::vector<ConvexityRow> rows;
  rows.reserve(rho_grid.size());
  for (const double rho : rho_grid) {
    ConvexityRow row;
    row.rho = rho;
    try {
      const ModelConfig config = ModelConfig::bonferroni(n, rho, alpha);
      const ExactResult he = h_exact(config, spec);
      const SecondDerivativeBreakdown hs = h_second(config, spec);
      row.fwer = he.fwer;
      row.h_second_total = hs.total;
      row.sign_tolerance = std::max(10.0 * hs.quad_error_estimate, 1e-8);
      row.fwer_curvature_sign = hs.total <= row.sign_tolerance ? +1 : -1;
      row.quad_error_estimate = he.quad_error_estimate + hs.quad_error_estimate;
      row.converged = he.converged && hs.converged;
    } catch (const std::exception&) {
      row.fwer = std::numeric_limits<double>::quiet_NaN();
      row.h_second_total = std::numeric_limits<double>::quiet_NaN();
      row.converged = false;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<AsymptoticRow> asymptotic_diagnostics(const std::vector<std::int64_t>& n_list,
                                                  double alpha, double rho) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::domain_error("asymptotic_diagnostics: rho must lie in (0,1)");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("asymptotic_diagnostics: alpha must lie in (0,1)");
  std::vector<AsymptoticRow> rows;
  rows.reserve(n_list.size());
  const double t = t_factor(rho);
  for (const std::int64_t n : n_list) {
    if (n < 2) throw std::invalid_argument("asymptotic_diagnostics: each n must be >= 2");
    const ModelConfig config = ModelConfig::bonferroni(n, rho, alpha);
    AsymptoticRow row;
    row.n = n;
    row.c = config.cutoff();
    row.c_squared_over_log_n = row.c * row.c / std::log(static_cast<double>(n));
    row.mills_check = mills_ratio_check(row.c);
    const double z0 = z0_solve(config);
    row.z0_plus_c_t = z0 + row.c * t;
    row.z0_plus_c_root_rho_t = z0 + row.c * std::sqrt(rho) * t;
    rows.push_back(row);
  }
  return rows;
}

std::vector<LemmaLadderRow> lemma_ladder(const std::vector<std::int64_t>& n_list,
                                         double alpha, double rho,
                                         const QuadratureSpec& spec) {
  std::vector<LemmaLadderRow> rows;
  rows.reserve(n_list.size());
  for (const std::int64_t n : n_list) {
    LemmaLadderRow row;
    row.n = n;
    try {
      const ModelConfig config = ModelConfig::bonferroni(n, rho, alpha);
      const SecondDerivativeBreakdown hs = h_second(config, spec);
      const EngineValue resid = lemma2_residual(config, spec);
      row.abs_term2 = std::fabs(hs.term2);
      row.abs_term3 = std::fabs(hs.term3);
      row.lemma2_residual = resid.value;
      row.converged = hs.converged && resid.converged;
    } catch (const std::exception&) {
      row.abs_term2 = row.abs_term3 = row.lemma2_residual =
          std::numeric_limits<double>::quiet_NaN();
      row.converged = false;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fwer
