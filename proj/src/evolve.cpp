#include "turbmom/evolve.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include "turbmom/errors.hpp"
#include "turbmom/quadrature.hpp"

namespace turbmom {

namespace {

using Complex = std::complex<double>;

Eigen::MatrixXcd drift_terms(const Eigen::MatrixXcd& theta0, const Eigen::VectorXcd& phi1,
                             RhsForm form) {
  const Eigen::Index n = theta0.rows();
  Eigen::MatrixXcd rhs(n, n);
  for (Eigen::Index b = 0; b < n; ++b) {
    for (Eigen::Index a = 0; a < n; ++a) {
      if (form == RhsForm::DriftTraceFixed) {
        rhs(b, a) = std::conj(phi1[b]) * theta0(b, a) + theta0(b, a) * phi1[a];
      } else {
        rhs(b, a) = -theta0(b, a) * std::conj(phi1[a]) - phi1[b] * theta0(b, a);
      }
    }
  }
  return rhs;
}

} // namespace

Eigen::MatrixXcd moment_rhs(const Eigen::MatrixXcd& theta_inv0, const Eigen::VectorXcd& phi1_diag,
                            RhsForm form) {
  if (form == RhsForm::Full) {
    throw InvalidArgumentError("moment_rhs: the full form needs a vertex kernel");
  }
  if (theta_inv0.rows() != phi1_diag.size() || theta_inv0.cols() != phi1_diag.size()) {
    throw DimensionError("moment_rhs: operands do not match");
  }
  return drift_terms(theta_inv0, phi1_diag, form);
}

Eigen::MatrixXcd moment_rhs(const Eigen::MatrixXcd& theta_inv0, const VertexKernel& vk,
                            const Eigen::VectorXcd& phi1_diag, RhsForm form) {
  const TransverseGrid& grid = vk.grid();
  const Eigen::Index n = grid.size();
  if (theta_inv0.rows() != n || theta_inv0.cols() != n || phi1_diag.size() != n) {
    throw DimensionError("moment_rhs: operands do not match the kernel grid");
  }
  if (form != RhsForm::Full) return drift_terms(theta_inv0, phi1_diag, form);
  Eigen::MatrixXcd rhs = drift_terms(theta_inv0, phi1_diag, form);

  const double w = grid.weight();
  for (Eigen::Index b = 0; b < n; ++b) {
    for (Eigen::Index a = 0; a < n; ++a) {
      Complex acc = 0.0;
      // Theta^{-1}(x, y) Phi_0(K_y, K_a, K_b, K_x): momentum conservation
      // fixes x from y.
      for (Eigen::Index y = 0; y < n; ++y) {
        const Eigen::Vector2i ux = grid.ipoints[static_cast<std::size_t>(y)] -
                                   grid.ipoints[static_cast<std::size_t>(a)] +
                                   grid.ipoints[static_cast<std::size_t>(b)];
        const int x = grid.index_of(ux);
        if (x < 0) continue;
        acc += w * theta_inv0(x, y) * vk.eval(static_cast<int>(y), static_cast<int>(a),
                                              static_cast<int>(b));
      }
      // Theta^{-1}(x, y) Phi_0(K_b, K_x, K_y, K_a): y fixed from x.
      for (Eigen::Index x = 0; x < n; ++x) {
        const Eigen::Vector2i uy = grid.ipoints[static_cast<std::size_t>(x)] +
                                   grid.ipoints[static_cast<std::size_t>(a)] -
                                   grid.ipoints[static_cast<std::size_t>(b)];
        const int y = grid.index_of(uy);
        if (y < 0) continue;
        acc += w * theta_inv0(x, y) * vk.eval(static_cast<int>(b), static_cast<int>(x), y);
      }
      rhs(b, a) += acc;
    }
  }
  return rhs;
}

EvolutionResult evolve_thermal(const ThermalState& initial, const TransverseGrid& grid,
                               const SpectrumModel& model, const std::vector<double>& z_samples,
                               const EvolveOptions& opts) {
  validate(model);
  if (z_samples.empty()) throw InvalidArgumentError("evolve_thermal: no z samples");
  const double z0 = initial.z;
  if (std::abs(z_samples.front() - z0) > 1e-12 * std::max(1.0, std::abs(z0))) {
    throw InvalidArgumentError("evolve_thermal: first sample must equal the state's z");
  }
  for (std::size_t i = 1; i < z_samples.size(); ++i) {
    if (!(z_samples[i] > z_samples[i - 1])) {
      throw InvalidArgumentError("evolve_thermal: z samples must be strictly increasing");
    }
  }
  if (initial.theta_inv.rows() != grid.size()) {
    throw DimensionError("evolve_thermal: state does not match grid");
  }

  const std::size_t ns = z_samples.size();
  EvolutionResult out;
  out.states.reserve(ns);
  out.trace_drift.resize(static_cast<Eigen::Index>(ns));
  out.quartic_norm.resize(static_cast<Eigen::Index>(ns));
  out.min_eigenvalue.resize(static_cast<Eigen::Index>(ns));
  out.validity_exit.assign(ns, 0);

  const double trace0 = weighted_trace(initial.theta_inv, initial.weight).real();

  auto rhs_at = [&](double zp, double anchor_z, const Eigen::MatrixXcd& anchor_theta) {
    Eigen::MatrixXcd rhs;
    double kernel_scale = 0.0;
    if (opts.rhs == RhsForm::Full) {
      // The drift diagonal must come from the same cached table as the
      // vertex terms or the trace cancellation degrades to quadrature error.
      VertexKernel vk(grid, model, zp, anchor_z, opts.quad);
      const Eigen::VectorXcd phi1 = vk.contracted_drift();
      kernel_scale = phi1.size() ? phi1.cwiseAbs().maxCoeff() : 0.0;
      rhs = moment_rhs(anchor_theta, vk, phi1, opts.rhs);
    } else {
      const DriftKernel phi1 = phi1_compute(grid, model, zp, anchor_z, opts.quad);
      kernel_scale = phi1.diag.size() ? phi1.diag.cwiseAbs().maxCoeff() : 0.0;
      rhs = moment_rhs(anchor_theta, phi1.diag, opts.rhs);
    }
    // Anchor the hermiticity check at the natural term magnitude: on states
    // where scattering in and out cancel (uniform occupation) the RHS itself
    // is zero to rounding and a purely relative test would divide noise by
    // noise.
    const double scale = std::max(rhs.norm(), 2.0 * kernel_scale * anchor_theta.norm());
    const double defect = (rhs - rhs.adjoint().eval()).norm();
    if (defect > 1e-8 * scale + 1e-300) {
      throw IntegrityError("evolve_thermal: RHS hermiticity drift " +
                           std::to_string(defect / (scale + 1e-300)));
    }
    return Eigen::MatrixXcd(0.5 * (rhs + rhs.adjoint().eval()));
  };

  auto record_sample = [&](std::size_t j, Eigen::MatrixXcd theta, double zj) {
    theta = 0.5 * (theta + theta.adjoint().eval());
    ThermalState s;
    s.theta_inv = std::move(theta);
    s.z = zj;
    s.weight = initial.weight;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s.theta_inv, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    const double max_eig = es.eigenvalues().maxCoeff();
    out.min_eigenvalue[static_cast<Eigen::Index>(j)] = min_eig;
    out.validity_exit[j] = (min_eig < -1e-6 * std::max(max_eig, 0.0)) ? 1 : 0;

    const double trace_j = weighted_trace(s.theta_inv, s.weight).real();
    out.trace_drift[static_cast<Eigen::Index>(j)] =
        std::abs(trace_j - trace0) / std::max(std::abs(trace0), 1e-300);

    if (opts.with_quartic) {
      out.quartic_norm[static_cast<Eigen::Index>(j)] =
          quartic_residual(initial, grid, model, zj, opts);
    } else {
      out.quartic_norm[static_cast<Eigen::Index>(j)] = std::numeric_limits<double>::quiet_NaN();
    }
    out.states.push_back(std::move(s));
  };

  record_sample(0, initial.theta_inv, z0);

  Eigen::MatrixXcd theta = initial.theta_inv;
  for (std::size_t j = 1; j < ns; ++j) {
    const double za = z_samples[j - 1];
    const double zb = z_samples[j];
    const double anchor_z = opts.resummed ? za : z0;
    const Eigen::MatrixXcd anchor_theta = opts.resummed ? theta : initial.theta_inv;

    const int sub = std::max(1, opts.refine);
    const double h = (zb - za) / sub;
    Eigen::MatrixXcd prev = rhs_at(za, anchor_z, anchor_theta);
    for (int m = 1; m <= sub; ++m) {
      Eigen::MatrixXcd next = rhs_at(za + m * h, anchor_z, anchor_theta);
      theta += (0.5 * h) * (prev + next);
      prev = std::move(next);
    }
    record_sample(j, theta, zb);
  }
  return out;
}

double trace_rate(const ThermalState& state, const TransverseGrid& grid,
                  const SpectrumModel& model, double z, const EvolveOptions& opts) {
  VertexKernel vk(grid, model, z, state.z, opts.quad);
  const Eigen::VectorXcd phi1 = vk.contracted_drift();
  const Eigen::MatrixXcd rhs = moment_rhs(state.theta_inv, vk, phi1, RhsForm::Full);
  return weighted_trace(rhs, state.weight).real();
}

double quartic_residual(const ThermalState& state, const TransverseGrid& grid,
                        const SpectrumModel& model, double z, const EvolveOptions& opts) {
  validate(model);
  if (z < state.z) throw InvalidIntervalError("quartic_residual: z must be >= state z");
  if (model.cn2 == 0.0 || z == state.z) return 0.0;

  VertexKernel vk(grid, model, z, state.z, opts.quad);
  const Eigen::MatrixXcd theta = diamond_inverse(state.theta_inv, state.weight);
  const int n = grid.size();
  const double w = grid.weight();

  // Coefficient of a*(c1) a(c2) a*(c3) a(c4) in the quartic part of the
  // Gaussian-substituted evolution equation (the four Phi_0 terms carrying
  // four field variables, prefactor 4).
  auto coeff = [&](int c1, int c2, int c3, int c4) {
    const auto& u1 = grid.ipoints[static_cast<std::size_t>(c1)];
    const auto& u2 = grid.ipoints[static_cast<std::size_t>(c2)];
    const auto& u3 = grid.ipoints[static_cast<std::size_t>(c3)];
    const auto& u4 = grid.ipoints[static_cast<std::size_t>(c4)];
    Complex acc = 0.0;
    for (int j = 0; j < n; ++j) {
      const auto& uj = grid.ipoints[static_cast<std::size_t>(j)];
      // a*(1) Th(2,a) a(a) a*(3) Th(4,b) a(b)
      int m = grid.index_of(u1 - uj + u3);
      if (m >= 0) acc += w * vk.eval(c1, j, c3) * theta(j, c2) * theta(m, c4);
      // a*(a) Th(a,1) a(2) a*(b) Th(b,3) a(4)
      m = grid.index_of(u2 + u4 - uj);
      if (m >= 0) acc += w * theta(c1, j) * theta(c3, m) * vk.eval(j, c2, m);
      // - a*(1) Th(2,a) a(a) a*(b) Th(b,3) a(4)
      m = grid.index_of(u4 + uj - u1);
      if (m >= 0) acc -= w * vk.eval(c1, j, m) * theta(j, c2) * theta(c3, m);
      // - a*(3) a*(a) Th(a,1) a(2) Th(4,b) a(b)
      m = grid.index_of(uj - u2 + u1);
      if (m >= 0) acc -= w * vk.eval(j, c2, c1) * theta(c3, j) * theta(m, c4);
    }
    return 4.0 * acc;
  };

  double sum2 = 0.0;
  if (n <= 9) {
    for (int c1 = 0; c1 < n; ++c1)
      for (int c2 = 0; c2 < n; ++c2)
        for (int c3 = 0; c3 < n; ++c3)
          for (int c4 = 0; c4 < n; ++c4) sum2 += std::norm(coeff(c1, c2, c3, c4));
  } else {
    std::mt19937_64 engine(opts.quartic_seed);
    for (int t = 0; t < opts.quartic_samples; ++t) {
      const int c1 = static_cast<int>(engine() % static_cast<std::uint64_t>(n));
      const int c2 = static_cast<int>(engine() % static_cast<std::uint64_t>(n));
      const int c3 = static_cast<int>(engine() % static_cast<std::uint64_t>(n));
      const int c4 = static_cast<int>(engine() % static_cast<std::uint64_t>(n));
      sum2 += std::norm(coeff(c1, c2, c3, c4));
    }
  }
  return std::sqrt(sum2);
}

DriftPropagator drift_only_propagator(const TransverseGrid& grid, const SpectrumModel& model,
                                      double z, double z0, int panels, const KernelQuadrature& quad) {
  if (z < z0) throw InvalidIntervalError("drift_only_propagator: z must be >= z0");
  validate(model);
  DriftPropagator prop;
  prop.z = z;
  prop.z0 = z0;
  prop.y_diag = Eigen::VectorXcd::Constant(grid.size(), 1.0);
  prop.norm_n = 1.0;
  if (z == z0 || model.cn2 == 0.0) return prop;

  const GaussRule rule = composite_gauss_legendre(z0, z, std::max(1, panels), 8);
  Eigen::VectorXcd integral = Eigen::VectorXcd::Zero(grid.size());
  double trace_integral = 0.0;
  for (Eigen::Index m = 0; m < rule.nodes.size(); ++m) {
    const DriftKernel k = phi1_compute(grid, model, rule.nodes[m], z0, quad);
    // The argument transform alpha -> Y <> alpha solves the trace-fixed drift
    // equation with dY/dz = -Phi_1^*(z); the conjugate partner acts on the
    // alpha* slot. (With the conjugate assignment the two first-order moment
    // increments disagree in the imaginary, non-Markovian part of Phi_1.)
    integral += rule.weights[m] * k.diag.conjugate();
    trace_integral += rule.weights[m] * 2.0 * k.diag.real().sum();
  }
  prop.y_diag -= integral;
  prop.norm_n = 1.0 - trace_integral;
  return prop;
}

ThermalState apply_field_transform(const ThermalState& state, const DriftPropagator& prop) {
  if (prop.y_diag.size() != state.theta_inv.rows()) {
    throw DimensionError("apply_field_transform: propagator does not match state");
  }
  for (Eigen::Index i = 0; i < prop.y_diag.size(); ++i) {
    if (prop.y_diag[i] == 0.0) {
      throw SingularTransformError("apply_field_transform: Y has a zero diagonal entry");
    }
  }
  ThermalState out;
  out.weight = state.weight;
  out.z = prop.z;
  const Eigen::Index n = state.theta_inv.rows();
  out.theta_inv.resize(n, n);
  for (Eigen::Index b = 0; b < n; ++b) {
    for (Eigen::Index a = 0; a < n; ++a) {
      out.theta_inv(b, a) = state.theta_inv(b, a) / (prop.y_diag[b] * std::conj(prop.y_diag[a]));
    }
  }
  return out;
}

} // namespace turbmom
