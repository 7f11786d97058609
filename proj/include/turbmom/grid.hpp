#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <vector>

namespace turbmom {

/// Zero-centered discretization of the transverse wave-vector plane.
///
/// Points live at K = u * delta_k / 2 with integer "doubled" coordinates u,
/// odd for even n_side and even for odd n_side, so the grid is exactly closed
/// under K -> -K and all |K|^2 and K - K' arithmetic stays integer-exact.
/// Ordering is row-major over (ix, iy), kx varying slowest.
struct TransverseGrid {
  int n_side = 0;
  double delta_k = 0.0; // rad/m
  double k0 = 0.0;      // optical wavenumber 2*pi/lambda, rad/m
  std::vector<Eigen::Vector2d> points;
  std::vector<Eigen::Vector2i> ipoints; // doubled coordinates

  int size() const { return n_side * n_side; }

  /// Contraction weight w = delta_k^2 / (2 pi)^2 of the d^2k/(2 pi)^2 measure.
  double weight() const {
    const double tp = 2.0 * std::numbers::pi;
    return delta_k * delta_k / (tp * tp);
  }

  /// Index of the point with the given doubled coordinates, or -1 if off-grid.
  int index_of(const Eigen::Vector2i& doubled) const {
    const int ix = (doubled.x() + n_side - 1);
    const int iy = (doubled.y() + n_side - 1);
    if (ix < 0 || iy < 0 || ix % 2 != 0 || iy % 2 != 0) return -1;
    const int jx = ix / 2, jy = iy / 2;
    if (jx >= n_side || jy >= n_side) return -1;
    return jx * n_side + jy;
  }

  /// Integer |K|^2 in units of (delta_k/2)^2.
  long norm2_int(int i) const {
    const auto& u = ipoints[static_cast<std::size_t>(i)];
    return static_cast<long>(u.x()) * u.x() + static_cast<long>(u.y()) * u.y();
  }

  double norm2(int i) const {
    return static_cast<double>(norm2_int(i)) * delta_k * delta_k * 0.25;
  }
};

/// Build an n_side x n_side grid covering [-k_extent, k_extent] per axis,
/// delta_k = 2 k_extent / n_side.
TransverseGrid build_grid(int n_side, double k_extent, double k0);

/// Discretized bilinear kernel A(K, K'); carries the contraction weight of the
/// grid it was built on so that diamond contractions can check compatibility.
struct BilinearKernel {
  Eigen::MatrixXcd values;
  double weight = 0.0;
  double z_from = 0.0;
  double z_to = 0.0;
  bool hermitian = false;
};

/// Zero kernel stamped with the grid's weight.
BilinearKernel make_kernel(const TransverseGrid& grid);

/// Discrete (2 pi)^2 delta(K - K'): diagonal 1/w, two-sided identity of diamond.
BilinearKernel grid_delta(const TransverseGrid& grid);

/// The diamond contraction (A <> B)(K, K'') = sum_K' w A(K, K') B(K', K'').
BilinearKernel diamond(const BilinearKernel& a, const BilinearKernel& b);

/// Trace under the grid measure: sum_K w A(K, K).
std::complex<double> weighted_trace(const BilinearKernel& a);
std::complex<double> weighted_trace(const Eigen::MatrixXcd& values, double weight);

/// Relative deviation from hermiticity, ||A - A^dag|| / ||A||.
double hermiticity_defect(const Eigen::MatrixXcd& values);

/// Diamond inverse X of A, satisfying A <> X = grid_delta.
Eigen::MatrixXcd diamond_inverse(const Eigen::MatrixXcd& values, double weight);

} // namespace turbmom
