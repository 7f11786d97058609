#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <vector>

#include "turbmom/grid.hpp"
#include "turbmom/spectrum.hpp"

namespace turbmom {

/// Quadrature controls for the z1 integral of the vertex kernels.
///
/// The panel count scales as ceil((z - z0) / l0) so both the decay of the
/// longitudinal correlation and the phase-mismatch oscillation are resolved;
/// an oscillation-based lower bound kicks in when exp(i z1 Delta / 2k) or a
/// flat-k_z cut oscillates faster than that.
struct KernelQuadrature {
  int gl_order = 12;
  int min_panels = 4;
  int max_panels = 20000;
  CorrelationTolerances b_tol{};
  int workers = 1;
};

/// Diagonal drift kernel Phi_1 (or its conjugate partner).
///
/// `diag` stores the diagonal density phi_1(K): the delta(K1 - K4) carried by
/// the continuum kernel is represented by the diagonal structure itself, so
/// that (Phi_1 <> X)(K, K') = phi_1(K) X(K, K') with no residual weight
/// factors.
struct DriftKernel {
  Eigen::VectorXcd diag;
  double z = 0.0;
  double z0 = 0.0;
  bool markovian = false;
};

/// Four-point momentum-conserving vertex kernel Phi_0(K1, K2, K3, K4, z, z0),
/// evaluated lazily from a cached table over integer (|q|^2, Delta) keys.
///
/// Phi_0 factorizes exactly as
///   k^2 exp[i z (|K2|^2 - |K1|^2 + |K4|^2 - |K3|^2) / 2k] H(q, Delta),
///   H(q, Delta) = int_0^{z - z0} exp(-i zeta Delta / 2k) B(|q|, zeta) dzeta,
/// with q = K1 - K2, Delta = |K4|^2 - |K3|^2 and K4 = K1 - K2 + K3. The
/// kernel is never materialized as a dense 4-index array.
class VertexKernel {
public:
  VertexKernel(const TransverseGrid& grid, const SpectrumModel& model, double z, double z0,
               const KernelQuadrature& quad = {});

  /// Phi_0 density at grid indices (i1, i2, i3); K4 is implicit. Returns 0
  /// when K4 falls outside the grid (truncation) or when z == z0.
  std::complex<double> eval(int i1, int i2, int i3) const;

  const TransverseGrid& grid() const { return grid_; }
  const SpectrumModel& model() const { return model_; }
  double z() const { return z_; }
  double z0() const { return z0_; }

  /// Drift diagonal obtained by contracting legs 2 and 3 over the grid:
  /// phi_1(K) = sum_K' w Phi_0(K, K', K', .). Identical to phi1_compute up to
  /// rounding; shares this kernel's cached table, which is what makes the
  /// trace-preservation identity of the moment evolution exact.
  Eigen::VectorXcd contracted_drift() const;

  /// Number of zeta quadrature nodes backing the cached table.
  int zeta_nodes() const;

private:
  TransverseGrid grid_;
  SpectrumModel model_;
  double z_;
  double z0_;
  struct Tables;
  std::shared_ptr<const Tables> tables_;
};

/// Non-Markovian drift kernel: phi_1(K1) = k^2 sum_K' w int_0^{z-z0}
/// exp[-i zeta (|K1|^2 - |K'|^2) / 2k] B(K1 - K', zeta) dzeta.
DriftKernel phi1_compute(const TransverseGrid& grid, const SpectrumModel& model, double z,
                         double z0, const KernelQuadrature& quad = {});

/// Conjugate partner Phi_1^*: entrywise complex conjugate of phi1_compute.
DriftKernel phi1_conjugate(const DriftKernel& k);

/// Markovian drift kernel: constant diagonal (k^2/2) sum_q w Phi_n(q, 0) with
/// q running over the grid, from the endpoint half-delta convention
/// int_0^L delta(zeta) f(zeta) dzeta = f(0)/2.
DriftKernel phi1_markovian(const TransverseGrid& grid, const SpectrumModel& model);

/// Build-time self check: max_K | sum_K' w Phi_0(K, K', K', .) - phi_1(K) |
/// / (|phi_1(K)| + floor). Requires matching grid, model and interval.
double contraction_residual(const VertexKernel& vk, const DriftKernel& dk);

} // namespace turbmom
