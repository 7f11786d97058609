#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "turbmom/grid.hpp"
#include "turbmom/kernels.hpp"
#include "turbmom/spectrum.hpp"
#include "turbmom/states.hpp"

namespace turbmom {

/// Which right-hand side drives the second-moment evolution.
///
/// Full:            the complete kernel equation, Phi_0 scattering-in terms
///                  plus the -Theta^{-1} Phi_1^* - Phi_1 Theta^{-1} drift.
/// DriftLiteral:    the Full equation with the Phi_0 terms dropped. Not trace
///                  preserving; used to isolate the per-mode attenuation rate.
/// DriftTraceFixed: the drift-only equation with the trace-restoring kappa
///                  term. On moments this flips the drift action to
///                  +Phi_1^* <> Theta^{-1} + Theta^{-1} <> Phi_1, which is the
///                  dynamics solved by the field-transformation propagator.
enum class RhsForm { Full, DriftLiteral, DriftTraceFixed };

struct EvolveOptions {
  RhsForm rhs = RhsForm::Full;
  bool resummed = false;      // re-anchor z0 to the previous sample each step
  bool with_quartic = true;   // quartic norms need an invertible Theta^{-1}
  int refine = 4;             // internal trapezoid refinement per interval
  KernelQuadrature quad{};
  std::uint64_t quartic_seed = 0x5EED;
  int quartic_samples = 10000;
};

struct EvolutionResult {
  std::vector<ThermalState> states;
  Eigen::VectorXd trace_drift;    // relative w-trace deviation from initial
  Eigen::VectorXd quartic_norm;   // non-Gaussianity magnitude (NaN if skipped)
  Eigen::VectorXd min_eigenvalue; // positivity watchdog input
  std::vector<std::uint8_t> validity_exit; // watchdog flag per sample
};

/// Right-hand side of the second-moment evolution, built from the state
/// frozen at the kernel's z0 (perturbative, not self-consistent).
Eigen::MatrixXcd moment_rhs(const Eigen::MatrixXcd& theta_inv0, const VertexKernel& vk,
                            const Eigen::VectorXcd& phi1_diag, RhsForm form);

/// Drift-only right-hand sides need no vertex kernel.
Eigen::MatrixXcd moment_rhs(const Eigen::MatrixXcd& theta_inv0, const Eigen::VectorXcd& phi1_diag,
                            RhsForm form);

/// Integrate Theta^{-1}(z) = Theta^{-1}(z0) + int RHS(z') dz' across the
/// requested samples (first sample must equal the state's z). Composite
/// trapezoid with `refine`-fold internal refinement; each output is
/// hermitized and checked.
EvolutionResult evolve_thermal(const ThermalState& initial, const TransverseGrid& grid,
                               const SpectrumModel& model, const std::vector<double>& z_samples,
                               const EvolveOptions& opts = {});

/// w-weighted trace of the Full RHS at z; vanishes by the contraction
/// identity between Phi_0 and Phi_1.
double trace_rate(const ThermalState& state, const TransverseGrid& grid,
                  const SpectrumModel& model, double z, const EvolveOptions& opts = {});

/// Norm of the quartic-in-alpha coefficient tensor generated by the Phi_0
/// terms acting on the Gaussian state: the non-Gaussianity production
/// measure. Full tensor on grids up to 3x3, seeded sampling above.
double quartic_residual(const ThermalState& state, const TransverseGrid& grid,
                        const SpectrumModel& model, double z, const EvolveOptions& opts = {});

/// Drift-only field-transformation propagator: Y diagonal density and the
/// normalization factor N(z), both at first perturbative order; the
/// divergent continuum traces are grid-regularized w-traces.
struct DriftPropagator {
  Eigen::VectorXcd y_diag;
  double norm_n = 1.0;
  double z = 0.0;
  double z0 = 0.0;
};

DriftPropagator drift_only_propagator(const TransverseGrid& grid, const SpectrumModel& model,
                                      double z, double z0, int panels = 12,
                                      const KernelQuadrature& quad = {});

/// Apply the field transformation to a state:
/// Theta^{-1} -> Y^{-1} <> Theta^{-1} <> (Y^dag)^{-1}. Normalization is
/// recorded in the propagator, not applied to moments.
ThermalState apply_field_transform(const ThermalState& state, const DriftPropagator& prop);

} // namespace turbmom
