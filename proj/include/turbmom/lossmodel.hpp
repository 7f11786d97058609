#pragma once

#include <Eigen/Dense>
#include <complex>

#include "turbmom/grid.hpp"
#include "turbmom/kernels.hpp"
#include "turbmom/states.hpp"

namespace turbmom {

/// First-moment diagnostics of the loss-based turbulence model: the candidate
/// equation 2 delta(K_a - K_b) dM1/dz = -2 Phi_1(K_a, K_b, z) only has a
/// solution if the Phi_1 diagonal is K-independent. k_variation measures the
/// obstruction: zero exactly in the Markovian limit, strictly positive
/// otherwise.
struct LossDiagnostics {
  Eigen::VectorXcd phi1_diag;
  std::complex<double> mean_rate; // K-average of the diagonal
  double k_variation = 0.0;       // relative std of the diagonal across K
  bool markovian = false;
};

LossDiagnostics first_moment_equation(const TransverseGrid& grid, const SpectrumModel& model,
                                      double z, double z0, bool markovian,
                                      const KernelQuadrature& quad = {});

/// Displaced Gaussian produced by applying loss L to a coherent state's
/// P-functional: center L zeta, vacuum covariance. The mode shape is only
/// rescaled, never distorted.
struct LossyGaussian {
  Eigen::VectorXcd center;
  double loss = 1.0;
};

LossyGaussian lossy_coherent_wigner(const CoherentState& state, double loss);

/// Mean photon number of the lossy coherent state: L^2 ||zeta||_w^2.
double mean_photon_number(const LossyGaussian& g, const TransverseGrid& grid);

} // namespace turbmom
