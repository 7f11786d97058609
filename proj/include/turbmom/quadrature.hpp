#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace turbmom {

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre recurrence. Deterministic for a given order.
struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

GaussRule gauss_legendre(int order);

/// Composite Gauss-Legendre rule over [a, b] with `panels` equal panels.
/// Nodes are emitted in ascending order.
GaussRule composite_gauss_legendre(double a, double b, int panels, int order);

struct AdaptiveResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evals = 0;
  bool converged = false;
};

/// Adaptive Gauss-Kronrod 15(7) quadrature over the segments defined by
/// `breakpoints` (ascending). Segments are bisected until the local error
/// estimate falls below max(abs_floor, rel_tol * |integral|) distributed by
/// width, or the evaluation budget runs out.
AdaptiveResult adaptive_gauss_kronrod(const std::function<double(double)>& f,
                                      const std::vector<double>& breakpoints,
                                      double rel_tol, double abs_floor, long max_evals);

inline AdaptiveResult adaptive_gauss_kronrod(const std::function<double(double)>& f, double a,
                                             double b, double rel_tol, double abs_floor,
                                             long max_evals) {
  return adaptive_gauss_kronrod(f, std::vector<double>{a, b}, rel_tol, abs_floor, max_evals);
}

} // namespace turbmom
