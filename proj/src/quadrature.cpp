#include "turbmom/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

#include "turbmom/errors.hpp"

namespace turbmom {

GaussRule gauss_legendre(int order) {
  if (order < 1) throw InvalidArgumentError("gauss_legendre: order must be >= 1");
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n(x) = 0.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = order * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

GaussRule composite_gauss_legendre(double a, double b, int panels, int order) {
  if (panels < 1) throw InvalidArgumentError("composite_gauss_legendre: panels must be >= 1");
  const GaussRule base = gauss_legendre(order);
  GaussRule rule;
  rule.nodes.resize(static_cast<Eigen::Index>(panels) * order);
  rule.weights.resize(static_cast<Eigen::Index>(panels) * order);
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    for (int j = 0; j < order; ++j) {
      rule.nodes[p * order + j] = mid + 0.5 * h * base.nodes[j];
      rule.weights[p * order + j] = 0.5 * h * base.weights[j];
    }
  }
  return rule;
}

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double result_g = kWg[3] * fc;
  double result_k = kWgk[7] * fc;
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double f1 = f(c - x);
    const double f2 = f(c + x);
    result_k += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) result_g += kWg[j / 2] * (f1 + f2);
  }
  Segment s;
  s.a = a;
  s.b = b;
  s.value = result_k * h;
  s.error = std::abs((result_k - result_g) * h);
  return s;
}

} // namespace

AdaptiveResult adaptive_gauss_kronrod(const std::function<double(double)>& f,
                                      const std::vector<double>& breakpoints, double rel_tol,
                                      double abs_floor, long max_evals) {
  if (breakpoints.size() < 2) throw InvalidArgumentError("adaptive_gauss_kronrod: need >= 2 breakpoints");
  AdaptiveResult out;
  const double width_total = breakpoints.back() - breakpoints.front();
  if (width_total <= 0.0) throw InvalidArgumentError("adaptive_gauss_kronrod: breakpoints must ascend");

  std::deque<Segment> work;
  double coarse = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    work.push_back(gk15(f, breakpoints[i], breakpoints[i + 1]));
    coarse += work.back().value;
    out.evals += 15;
  }

  double done_value = 0.0, done_error = 0.0;
  while (!work.empty()) {
    const Segment seg = work.back();
    work.pop_back();
    const double scale = std::max(std::abs(coarse), std::abs(done_value));
    const double tol_here =
        std::max(abs_floor, rel_tol * scale) * ((seg.b - seg.a) / width_total);
    if (seg.error <= tol_here || out.evals + 30 > max_evals ||
        seg.b - seg.a < 1e-14 * width_total) {
      done_value += seg.value;
      done_error += seg.error;
      continue;
    }
    const double mid = 0.5 * (seg.a + seg.b);
    work.push_back(gk15(f, seg.a, mid));
    work.push_back(gk15(f, mid, seg.b));
    out.evals += 30;
  }

  out.value = done_value;
  out.error_estimate = done_error;
  out.converged = done_error <= std::max(abs_floor, rel_tol * std::abs(done_value)) * 1.5 + 1e-300;
  return out;
}

} // namespace turbmom
