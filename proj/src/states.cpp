#include "turbmom/states.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "turbmom/errors.hpp"

namespace turbmom {

ThermalState make_thermal_state(const TransverseGrid& grid, Eigen::MatrixXcd theta_inv, double z) {
  if (theta_inv.rows() != grid.size() || theta_inv.cols() != grid.size()) {
    throw DimensionError("make_thermal_state: kernel does not match grid");
  }
  if (hermiticity_defect(theta_inv) > 1e-12) {
    throw InvalidArgumentError("make_thermal_state: kernel is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(theta_inv, Eigen::EigenvaluesOnly);
  const double max_eig = es.eigenvalues().size() ? es.eigenvalues().maxCoeff() : 0.0;
  if (es.eigenvalues().size() && es.eigenvalues().minCoeff() < -1e-10 * std::max(max_eig, 0.0)) {
    throw InvalidArgumentError("make_thermal_state: kernel is not positive semidefinite");
  }
  ThermalState s;
  s.theta_inv = std::move(theta_inv);
  s.z = z;
  s.weight = grid.weight();
  return s;
}

ThermalState thermal_from_modes(const TransverseGrid& grid, const Eigen::VectorXd& occupations,
                                double z) {
  if (occupations.size() != grid.size()) {
    throw DimensionError("thermal_from_modes: occupation vector does not match grid");
  }
  for (Eigen::Index i = 0; i < occupations.size(); ++i) {
    if (!(occupations[i] >= 0.0) || !std::isfinite(occupations[i])) {
      throw InvalidArgumentError("thermal_from_modes: occupations must be finite and >= 0");
    }
  }
  const double w = grid.weight();
  Eigen::MatrixXcd theta_inv = Eigen::MatrixXcd::Zero(grid.size(), grid.size());
  for (Eigen::Index i = 0; i < occupations.size(); ++i) {
    theta_inv(i, i) = (2.0 * occupations[i] + 1.0) / w;
  }
  return make_thermal_state(grid, std::move(theta_inv), z);
}

Eigen::MatrixXcd second_moment(const ThermalState& state) { return 0.5 * state.theta_inv; }

double mode_photon_number(const ThermalState& state, int i) {
  return 0.5 * state.theta_inv(i, i).real() * state.weight - 0.5;
}

std::complex<double> gaussian_moment(const ThermalState& state,
                                     std::span<const FieldFactor> factors) {
  if (factors.size() > 4) {
    throw InvalidArgumentError("gaussian_moment: order must be <= 4");
  }
  std::vector<int> conj_idx, plain_idx;
  for (const FieldFactor& f : factors) {
    if (f.index < 0 || f.index >= state.theta_inv.rows()) {
      throw InvalidArgumentError("gaussian_moment: index out of range");
    }
    (f.conjugated ? conj_idx : plain_idx).push_back(f.index);
  }
  // Unbalanced moments vanish for the phase-invariant Gaussian.
  if (conj_idx.size() != plain_idx.size()) return 0.0;

  // <a*(K) a(K')> = Theta^{-1}(K', K) / 2.
  auto pair_moment = [&](int c, int p) { return 0.5 * state.theta_inv(p, c); };

  switch (conj_idx.size()) {
    case 0:
      return 1.0;
    case 1:
      return pair_moment(conj_idx[0], plain_idx[0]);
    case 2:
      return pair_moment(conj_idx[0], plain_idx[0]) * pair_moment(conj_idx[1], plain_idx[1]) +
             pair_moment(conj_idx[0], plain_idx[1]) * pair_moment(conj_idx[1], plain_idx[0]);
    default:
      return 0.0;
  }
}

} // namespace turbmom
