#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>

#include "turbmom/grid.hpp"

namespace turbmom {

/// Gaussian (thermal-like) Wigner functional W ~ exp(-2 a* <> Theta <> a),
/// stored through the diamond-inverse kernel Theta^{-1}: the evolution
/// equation is written for Theta^{-1} and the second moment is
/// <a*(K) a(K')> = Theta^{-1}(K', K) / 2. Theta itself is computed by
/// inversion only when explicitly requested.
struct ThermalState {
  Eigen::MatrixXcd theta_inv;
  double z = 0.0;
  double weight = 0.0; // contraction weight of the owning grid
};

/// Validates hermiticity (1e-12 relative) and positive semidefiniteness
/// (eigenvalues >= -1e-10 * max) before accepting the kernel.
ThermalState make_thermal_state(const TransverseGrid& grid, Eigen::MatrixXcd theta_inv,
                                double z = 0.0);

/// Diagonal thermal state from per-mode occupation numbers: in symmetric
/// ordering the per-mode second moment is n + 1/2, so
/// Theta^{-1}(K,K) = (2 n(K) + 1) / w. Vacuum (all zero) gives the grid delta.
ThermalState thermal_from_modes(const TransverseGrid& grid, const Eigen::VectorXd& occupations,
                                double z = 0.0);

/// Second moment matrix <a*(K_a) a(K_b)> laid out as M(b, a) = Theta^{-1}(b, a) / 2.
Eigen::MatrixXcd second_moment(const ThermalState& state);

/// Mean photon number of mode i: <a* a>(K,K) w - 1/2 (symmetric-ordering
/// vacuum subtraction).
double mode_photon_number(const ThermalState& state, int i);

/// One field factor of a moment request: alpha(K_index) or its conjugate.
struct FieldFactor {
  int index = 0;
  bool conjugated = false;
};

/// Gaussian moment <prod factors> of the state, Wick-evaluated. Total order
/// must be <= 4. Odd orders and unbalanced conjugation counts return exactly
/// zero (they vanish for any zero-mean Gaussian).
std::complex<double> gaussian_moment(const ThermalState& state, std::span<const FieldFactor> factors);

/// Coherent-state parameter function zeta(K).
struct CoherentState {
  Eigen::VectorXcd zeta;
};

} // namespace turbmom
