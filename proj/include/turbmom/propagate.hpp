#pragma once

#include <Eigen/Dense>
#include <vector>

#include "turbmom/evolve.hpp"
#include "turbmom/grid.hpp"
#include "turbmom/medium.hpp"

namespace turbmom {

/// Co-propagating field spectrum G_c(K) of one classical realization: the
/// full angular spectrum with the accumulated free-space quadratic phase
/// removed, so only medium-induced evolution remains.
struct FieldRealization {
  Eigen::VectorXcd gc;
  double z = 0.0;
};

struct PropagationTelemetry {
  double max_norm_drift = 0.0; // relative w-norm drift over all steps
  int steps = 0;
};

/// Split-step integration of the paraxial equation through one medium
/// realization: free-space phase in the spectral domain, medium phase
/// exp(-i k0 n~ dz) in the position domain (Strang splitting), then
/// conversion back to the co-propagating frame. Each substep is a pure
/// phase, so the w-weighted norm is conserved to rounding; drift beyond
/// 1e-10 relative raises IntegrityError.
FieldRealization propagate_classical(const FieldRealization& initial, const Medium3D& medium,
                                     const TransverseGrid& grid,
                                     PropagationTelemetry* telemetry = nullptr);

/// Unitary transform pair between the offset spectral grid and its conjugate
/// position grid (positions X_j = (j - (n-1)/2) dx, dx = 2 pi / (n delta_k)).
/// Exposed for tests; propagate_classical uses them internally.
Eigen::VectorXcd spectrum_to_position(const TransverseGrid& grid, const Eigen::VectorXcd& gk);
Eigen::VectorXcd position_to_spectrum(const TransverseGrid& grid, const Eigen::VectorXcd& gx);

/// Ensemble estimate of the mutual coherence function
/// mcf(a, b) = < conj(G_c(K_a)) G_c(K_b) > with per-entry standard errors.
struct MCFEstimate {
  Eigen::MatrixXcd mcf;
  Eigen::MatrixXd stderr_map;
  int n_realizations = 0;
  double z = 0.0;
};

MCFEstimate estimate_mcf(const std::vector<FieldRealization>& ensemble);

/// Per-entry z-scores of the Monte-Carlo MCF increment against the
/// second-moment prediction of the kernel evolution, with a global summary.
/// The baseline on both sides is the evolution's initial state (the ensemble
/// must have been launched from a matched initial field).
struct MomentComparison {
  Eigen::MatrixXd z_scores;
  double frac_within_2 = 0.0;
  double frac_beyond_3 = 0.0;
  double mean_chi2 = 0.0;
  double max_theory_increment = 0.0;
};

MomentComparison compare_mcf_to_moment(const MCFEstimate& mcf, const EvolutionResult& evo,
                                       double z, double perturbative_allowance_rel = 0.05);

} // namespace turbmom
