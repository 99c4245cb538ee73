#pragma once

#include <functional>
#include <vector>

namespace fwer {

enum class QuadMethod {
  gauss_hermite,
  adaptive_subdivision,
};

struct QuadratureSpec {
  QuadMethod method = QuadMethod::adaptive_subdivision;
  int node_count = 201;  // gauss_hermite only; must be >= 32
  double abs_tol = 1e-11;
  double rel_tol = 1e-11;
  int max_subdivisions = 4000;

  void validate() const;  // throws std::invalid_argument on bad settings
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
  long long evaluations = 0;
};

struct GaussHermiteNode {
  double abscissa;  // node of the e^{-t^2} measure
  double weight;
};

// Nodes/weights for n-point Gauss-Hermite quadrature, cached per n.
const std::vector<GaussHermiteNode>& gauss_hermite_rule(int n);

// Integral of f(z) * phi(z) dz over the real line via the substitution
// z = sqrt(2) t against the e^{-t^2} measure.
double gauss_hermite_expectation(const std::function<double(double)>& f, int node_count);

// Plain integral of g over [a,b] by 15-point Gauss-Legendre panels with
// recursive bisection. Subdivision stops when the halved-panel correction
// falls below the local tolerance; exceeding max_subdivisions reports
// converged = false rather than falling back silently.
QuadResult integrate_adaptive(const std::function<double(double)>& g, double a,
                              double b, double abs_tol, double rel_tol,
                              int max_subdivisions);

}  // namespace fwer
