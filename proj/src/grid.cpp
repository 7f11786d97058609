#include "turbmom/grid.hpp"

#include "turbmom/errors.hpp"

namespace turbmom {

TransverseGrid build_grid(int n_side, double k_extent, double k0) {
  if (n_side < 2) throw InvalidArgumentError("build_grid: n_side must be >= 2");
  if (!(k_extent > 0.0)) throw InvalidArgumentError("build_grid: k_extent must be positive");
  if (!(k0 > 0.0)) throw InvalidArgumentError("build_grid: k0 must be positive");

  TransverseGrid grid;
  grid.n_side = n_side;
  grid.delta_k = 2.0 * k_extent / n_side;
  grid.k0 = k0;
  grid.points.reserve(static_cast<std::size_t>(n_side) * n_side);
  grid.ipoints.reserve(static_cast<std::size_t>(n_side) * n_side);
  for (int ix = 0; ix < n_side; ++ix) {
    const int ux = 2 * ix - (n_side - 1);
    for (int iy = 0; iy < n_side; ++iy) {
      const int uy = 2 * iy - (n_side - 1);
      grid.ipoints.emplace_back(ux, uy);
      grid.points.emplace_back(0.5 * grid.delta_k * ux, 0.5 * grid.delta_k * uy);
    }
  }
  return grid;
}

BilinearKernel make_kernel(const TransverseGrid& grid) {
  BilinearKernel k;
  k.values = Eigen::MatrixXcd::Zero(grid.size(), grid.size());
  k.weight = grid.weight();
  return k;
}

BilinearKernel grid_delta(const TransverseGrid& grid) {
  BilinearKernel k = make_kernel(grid);
  k.values.diagonal().setConstant(1.0 / k.weight);
  k.hermitian = true;
  return k;
}

BilinearKernel diamond(const BilinearKernel& a, const BilinearKernel& b) {
  if (a.values.rows() != a.values.cols() || b.values.rows() != b.values.cols() ||
      a.values.rows() != b.values.rows() || a.weight != b.weight) {
    throw DimensionError("diamond: kernels live on different grids");
  }
  BilinearKernel out;
  out.weight = a.weight;
  out.z_from = a.z_from;
  out.z_to = b.z_to;
  out.values = a.weight * (a.values * b.values);
  return out;
}

std::complex<double> weighted_trace(const BilinearKernel& a) {
  return weighted_trace(a.values, a.weight);
}

std::complex<double> weighted_trace(const Eigen::MatrixXcd& values, double weight) {
  return weight * values.trace();
}

double hermiticity_defect(const Eigen::MatrixXcd& values) {
  const double norm = values.norm();
  if (norm == 0.0) return 0.0;
  return (values - values.adjoint().eval()).norm() / norm;
}

Eigen::MatrixXcd diamond_inverse(const Eigen::MatrixXcd& values, double weight) {
  // A <> X = delta  =>  w A X = (1/w) I  =>  X = A^{-1} / w^2.
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(values);
  if (!lu.isInvertible()) throw SingularTransformError("diamond_inverse: kernel is singular");
  return lu.inverse() / (weight * weight);
}

} // namespace turbmom
