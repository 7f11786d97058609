#include "turbmom/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "turbmom/errors.hpp"
#include "turbmom/parallel.hpp"
#include "turbmom/quadrature.hpp"

namespace turbmom {

namespace {

// Integer-keyed geometry shared by the vertex and drift kernels. Points sit
// at K = u delta_k / 2 with integer doubled coordinates u, so |q|^2 and the
// phase mismatch Delta = |K4|^2 - |K3|^2 are exact integers in units of
// (delta_k / 2)^2.
struct IntegerGeometry {
  std::vector<long> q2_values;    // sorted unique |u_i - u_j|^2
  std::vector<long> delta_values; // sorted unique norm2_int differences
  double unit = 0.0;              // (delta_k / 2)^2

  int q2_index(long q2) const {
    const auto it = std::lower_bound(q2_values.begin(), q2_values.end(), q2);
    if (it == q2_values.end() || *it != q2) return -1;
    return static_cast<int>(it - q2_values.begin());
  }
  int delta_index(long d) const {
    const auto it = std::lower_bound(delta_values.begin(), delta_values.end(), d);
    if (it == delta_values.end() || *it != d) return -1;
    return static_cast<int>(it - delta_values.begin());
  }
};

IntegerGeometry make_geometry(const TransverseGrid& grid) {
  IntegerGeometry geo;
  geo.unit = 0.25 * grid.delta_k * grid.delta_k;
  const int n = grid.n_side;
  std::vector<long> q2;
  for (int m1 = -(n - 1); m1 <= n - 1; ++m1) {
    for (int m2 = -(n - 1); m2 <= n - 1; ++m2) {
      q2.push_back(4L * (static_cast<long>(m1) * m1 + static_cast<long>(m2) * m2));
    }
  }
  std::sort(q2.begin(), q2.end());
  q2.erase(std::unique(q2.begin(), q2.end()), q2.end());
  geo.q2_values = std::move(q2);

  std::vector<long> norms;
  norms.reserve(grid.size());
  for (int i = 0; i < grid.size(); ++i) norms.push_back(grid.norm2_int(i));
  std::sort(norms.begin(), norms.end());
  norms.erase(std::unique(norms.begin(), norms.end()), norms.end());
  std::vector<long> deltas;
  deltas.reserve(norms.size() * norms.size());
  for (long s1 : norms)
    for (long s2 : norms) deltas.push_back(s1 - s2);
  std::sort(deltas.begin(), deltas.end());
  deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());
  geo.delta_values = std::move(deltas);
  return geo;
}

// Composite Gauss-Legendre rule over zeta in [0, Z].
GaussRule make_zeta_rule(const TransverseGrid& grid, const SpectrumModel& model, double Z,
                         const IntegerGeometry& geo, const KernelQuadrature& quad) {
  double feature = model.inner_scale;
  if (!(feature > 0.0)) {
    // Kolmogorov has no inner scale; fall back to the decay scale of the
    // widest-q correlation row.
    const double a_max = std::sqrt(static_cast<double>(geo.q2_values.back()) * geo.unit +
                                   model.kappa0() * model.kappa0());
    feature = a_max > 0.0 ? 0.25 / a_max : Z;
  }
  double osc_rate = 0.0; // rad/m of the fastest zeta oscillation
  const double delta_max = static_cast<double>(
      std::max(std::abs(geo.delta_values.front()), std::abs(geo.delta_values.back())));
  osc_rate += delta_max * geo.unit / (2.0 * grid.k0);
  if (model.flat_kz) osc_rate += model.flat_kz_cut;

  long panels = static_cast<long>(std::ceil(Z / feature));
  panels = std::max(panels, static_cast<long>(std::ceil(Z * osc_rate / (2.0 * std::numbers::pi))));
  panels = std::clamp(panels, static_cast<long>(quad.min_panels),
                      static_cast<long>(quad.max_panels));
  return composite_gauss_legendre(0.0, Z, static_cast<int>(panels), quad.gl_order);
}

// B(|q|, zeta) sampled on the zeta rule for every unique |q|^2; rows are
// built in parallel but deterministically keyed by q2 index.
Eigen::MatrixXd make_b_rows(const SpectrumModel& model, const IntegerGeometry& geo,
                            const GaussRule& zeta, const KernelQuadrature& quad) {
  const int nq = static_cast<int>(geo.q2_values.size());
  const int nz = static_cast<int>(zeta.nodes.size());
  Eigen::MatrixXd rows(nq, nz);
  parallel_for(static_cast<std::size_t>(nq), quad.workers, [&](std::size_t r) {
    const double q2 = static_cast<double>(geo.q2_values[r]) * geo.unit;
    for (int j = 0; j < nz; ++j) {
      rows(static_cast<int>(r), j) = longitudinal_correlation_q2(model, q2, zeta.nodes[j], quad.b_tol);
    }
  });
  return rows;
}

} // namespace

struct VertexKernel::Tables {
  IntegerGeometry geo;
  GaussRule zeta;
  Eigen::MatrixXcd h; // (q2 index, delta index) -> H(q, Delta)
  bool empty = false;
};

VertexKernel::VertexKernel(const TransverseGrid& grid, const SpectrumModel& model, double z,
                           double z0, const KernelQuadrature& quad)
    : grid_(grid), model_(model), z_(z), z0_(z0) {
  if (z < z0) throw InvalidIntervalError("VertexKernel: z must be >= z0");
  validate(model);
  auto tables = std::make_shared<Tables>();
  tables->geo = make_geometry(grid);
  const double Z = z - z0;
  if (Z == 0.0 || model.cn2 == 0.0) {
    tables->empty = true;
    tables_ = std::move(tables);
    return;
  }
  tables->zeta = make_zeta_rule(grid, model, Z, tables->geo, quad);
  const Eigen::MatrixXd b_rows = make_b_rows(model, tables->geo, tables->zeta, quad);

  const int nq = static_cast<int>(tables->geo.q2_values.size());
  const int nd = static_cast<int>(tables->geo.delta_values.size());
  const int nz = static_cast<int>(tables->zeta.nodes.size());
  tables->h.resize(nq, nd);
  const double unit = tables->geo.unit;
  const double k0 = grid.k0;
  auto& t = *tables;
  parallel_for(static_cast<std::size_t>(nd), quad.workers, [&](std::size_t d) {
    const double rate = static_cast<double>(t.geo.delta_values[d]) * unit / (2.0 * k0);
    Eigen::VectorXcd phases(nz);
    for (int j = 0; j < nz; ++j) {
      phases[j] = std::polar(t.zeta.weights[j], -rate * t.zeta.nodes[j]);
    }
    for (int r = 0; r < nq; ++r) {
      std::complex<double> acc = 0.0;
      for (int j = 0; j < nz; ++j) acc += phases[j] * b_rows(r, j);
      t.h(r, static_cast<int>(d)) = acc;
    }
  });
  tables_ = std::move(tables);
}

int VertexKernel::zeta_nodes() const {
  return tables_->empty ? 0 : static_cast<int>(tables_->zeta.nodes.size());
}

Eigen::VectorXcd VertexKernel::contracted_drift() const {
  const int n = grid_.size();
  const double w = grid_.weight();
  Eigen::VectorXcd diag = Eigen::VectorXcd::Zero(n);
  for (int i = 0; i < n; ++i) {
    std::complex<double> acc = 0.0;
    for (int j = 0; j < n; ++j) acc += w * eval(i, j, j);
    diag[i] = acc;
  }
  return diag;
}

std::complex<double> VertexKernel::eval(int i1, int i2, int i3) const {
  const auto& u1 = grid_.ipoints[static_cast<std::size_t>(i1)];
  const auto& u2 = grid_.ipoints[static_cast<std::size_t>(i2)];
  const auto& u3 = grid_.ipoints[static_cast<std::size_t>(i3)];
  const Eigen::Vector2i u4 = u1 - u2 + u3;
  const int i4 = grid_.index_of(u4);
  if (i4 < 0) return 0.0; // momentum conservation off the truncated grid
  if (tables_->empty) return 0.0;

  const Eigen::Vector2i du = u1 - u2;
  const long q2 = static_cast<long>(du.x()) * du.x() + static_cast<long>(du.y()) * du.y();
  const long delta = grid_.norm2_int(i4) - grid_.norm2_int(i3);
  const int r = tables_->geo.q2_index(q2);
  const int d = tables_->geo.delta_index(delta);
  if (r < 0 || d < 0) return 0.0;

  // Combined external phase z (|K2|^2 - |K1|^2 + |K4|^2 - |K3|^2) / 2k.
  const long phase_int = (grid_.norm2_int(i2) - grid_.norm2_int(i1)) + delta;
  const double k2 = grid_.k0 * grid_.k0;
  const std::complex<double> phase =
      std::polar(1.0, z_ * static_cast<double>(phase_int) * tables_->geo.unit / (2.0 * grid_.k0));
  return k2 * phase * tables_->h(r, d);
}

DriftKernel phi1_compute(const TransverseGrid& grid, const SpectrumModel& model, double z,
                         double z0, const KernelQuadrature& quad) {
  if (z < z0) throw InvalidIntervalError("phi1_compute: z must be >= z0");
  validate(model);
  DriftKernel out;
  out.z = z;
  out.z0 = z0;
  out.diag = Eigen::VectorXcd::Zero(grid.size());
  const double Z = z - z0;
  if (Z == 0.0 || model.cn2 == 0.0) return out;

  const IntegerGeometry geo = make_geometry(grid);
  const GaussRule zeta = make_zeta_rule(grid, model, Z, geo, quad);
  const Eigen::MatrixXd b_rows = make_b_rows(model, geo, zeta, quad);

  const int n = grid.size();
  const int nz = static_cast<int>(zeta.nodes.size());
  const double w = grid.weight();
  const double k2 = grid.k0 * grid.k0;
  const double unit = geo.unit;
  parallel_for(static_cast<std::size_t>(n), quad.workers, [&](std::size_t i) {
    const auto& ui = grid.ipoints[i];
    const long n2i = grid.norm2_int(static_cast<int>(i));
    std::complex<double> acc = 0.0;
    for (int j = 0; j < n; ++j) {
      const Eigen::Vector2i du = ui - grid.ipoints[static_cast<std::size_t>(j)];
      const long q2 = static_cast<long>(du.x()) * du.x() + static_cast<long>(du.y()) * du.y();
      const int r = geo.q2_index(q2);
      const double rate = static_cast<double>(n2i - grid.norm2_int(j)) * unit / (2.0 * grid.k0);
      std::complex<double> inner = 0.0;
      for (int m = 0; m < nz; ++m) {
        inner += std::polar(zeta.weights[m], -rate * zeta.nodes[m]) * b_rows(r, m);
      }
      acc += w * inner;
    }
    out.diag[static_cast<Eigen::Index>(i)] = k2 * acc;
  });
  return out;
}

DriftKernel phi1_conjugate(const DriftKernel& k) {
  DriftKernel out = k;
  out.diag = k.diag.conjugate();
  return out;
}

DriftKernel phi1_markovian(const TransverseGrid& grid, const SpectrumModel& model) {
  validate(model);
  DriftKernel out;
  out.markovian = true;
  const double w = grid.weight();
  double sum = 0.0;
  for (int j = 0; j < grid.size(); ++j) {
    sum += w * markovian_psd(model, grid.points[static_cast<std::size_t>(j)]);
  }
  const double k2 = grid.k0 * grid.k0;
  out.diag = Eigen::VectorXcd::Constant(grid.size(), 0.5 * k2 * sum);
  return out;
}

double contraction_residual(const VertexKernel& vk, const DriftKernel& dk) {
  const TransverseGrid& grid = vk.grid();
  if (dk.diag.size() != grid.size()) throw DimensionError("contraction_residual: size mismatch");
  if (dk.z != vk.z() || dk.z0 != vk.z0()) {
    throw InvalidArgumentError("contraction_residual: kernel intervals differ");
  }
  const double w = grid.weight();
  const double floor = 1e-30 * (1.0 + dk.diag.cwiseAbs().maxCoeff());
  double worst = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    std::complex<double> acc = 0.0;
    for (int j = 0; j < grid.size(); ++j) acc += w * vk.eval(i, j, j);
    const double num = std::abs(acc - dk.diag[i]);
    worst = std::max(worst, num / (std::abs(dk.diag[i]) + floor));
  }
  return worst;
}

} // namespace turbmom
