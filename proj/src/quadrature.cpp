#include "fwer/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace fwer {

void QuadratureSpec::validate() const {
  if (method == QuadMethod::gauss_hermite && node_count < 32)
    throw std::invalid_argument("QuadratureSpec: gauss_hermite needs node_count >= 32");
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
    throw std::invalid_argument("QuadratureSpec: tolerances must be positive");
  if (max_subdivisions < 1)
    throw std::invalid_argument("QuadratureSpec: max_subdivisions must be positive");
}

namespace {

constexpr double kSqrtPi = 1.77245385090551602730;
constexpr double kSqrt2 = 1.41421356237309504880;

// Gauss-Hermite nodes by Newton iteration on the orthonormal Hermite
// recurrence (stable for large n), largest root first. Classic gauher logic.
std::vector<GaussHermiteNode> build_hermite_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite_rule: n must be positive");
  std::vector<GaussHermiteNode> rule(n);
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule[0].abscissa;
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule[1].abscissa;
    } else {
      z = 2.0 * z - rule[i - 2].abscissa;
    }
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 0.75112554446494248286;  // pi^{-1/4}
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::fabs(dz) <= 1e-15 * (1.0 + std::fabs(z))) break;
    }
    rule[i].abscissa = z;
    rule[i].weight = 2.0 / (pp * pp);
    rule[n - 1 - i].abscissa = -z;
    rule[n - 1 - i].weight = rule[i].weight;
  }
  if (n % 2 == 1) rule[m - 1].abscissa = 0.0;
  return rule;
}

const std::vector<GaussHermiteNode>& cached_hermite_rule(int n) {
  static std::mutex mtx;
  static std::map<int, std::unique_ptr<const std::vector<GaussHermiteNode>>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, std::make_unique<const std::vector<GaussHermiteNode>>(
                              build_hermite_rule(n))).first;
  }
  return *it->second;
}

// 15-point Gauss-Legendre on [-1,1]; nodes by Newton on the Legendre
// recurrence, computed once.
struct LegendreRule {
  double x[15];
  double w[15];
};

const LegendreRule& legendre15() {
  static const LegendreRule rule = [] {
    LegendreRule r{};
    const int n = 15;
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p1 = 1.0, p2 = 0.0;
        for (int j = 0; j < n; ++j) {
          const double p3 = p2;
          p2 = p1;
          p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
        }
        pp = n * (z * p1 - p2) / (z * z - 1.0);
        const double dz = p1 / pp;
        z -= dz;
        if (std::fabs(dz) < 1e-16) break;
      }
      r.x[i] = -z;
      r.x[n - 1 - i] = z;
      r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return r;
  }();
  return rule;
}

double gl15_panel(const std::function<double(double)>& g, double a, double b) {
  const LegendreRule& rule = legendre15();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 15; ++i) sum += rule.w[i] * g(mid + half * rule.x[i]);
  return sum * half;
}

}  // namespace

const std::vector<GaussHermiteNode>& gauss_hermite_rule(int n) {
  return cached_hermite_rule(n);
}

double gauss_hermite_expectation(const std::function<double(double)>& f, int node_count) {
  const auto& rule = gauss_hermite_rule(node_count);
  double sum = 0.0;
  for (const auto& node : rule) sum += node.weight * f(kSqrt2 * node.abscissa);
  return sum / kSqrtPi;
}

QuadResult integrate_adaptive(const std::function<double(double)>& g, double a,
                              double b, double abs_tol, double rel_tol,
                              int max_subdivisions) {
  struct Panel {
    double a, b, estimate, tol;
  };
  QuadResult out;
  const double whole = gl15_panel(g, a, b);
  out.evaluations = 15;
  const double tol0 = std::max(abs_tol, rel_tol * std::fabs(whole));
  std::vector<Panel> stack{{a, b, whole, tol0}};
  out.converged = true;
  int subdivisions = 0;
  while (!stack.empty()) {
    const Panel panel = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (panel.a + panel.b);
    const double left = gl15_panel(g, panel.a, mid);
    const double right = gl15_panel(g, mid, panel.b);
    out.evaluations += 30;
    const double refined = left + right;
    const double delta = std::fabs(refined - panel.estimate);
    const bool budget_left = subdivisions < max_subdivisions;
    if (delta <= panel.tol || !budget_left) {
      out.value += refined;
      out.error_estimate += delta;
      if (delta > panel.tol) out.converged = false;
    } else {
      ++subdivisions;
      stack.push_back({panel.a, mid, left, 0.5 * panel.tol});
      stack.push_back({mid, panel.b, right, 0.5 * panel.tol});
    }
  }
  return out;
}

}  // namespace fwer
