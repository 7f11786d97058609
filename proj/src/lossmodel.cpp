#include "turbmom/lossmodel.hpp"

#include <cmath>
#include <limits>

#include "turbmom/errors.hpp"

namespace turbmom {

LossDiagnostics first_moment_equation(const TransverseGrid& grid, const SpectrumModel& model,
                                      double z, double z0, bool markovian,
                                      const KernelQuadrature& quad) {
  if (!(z > z0)) throw InvalidIntervalError("first_moment_equation: z must be > z0");
  LossDiagnostics diag;
  diag.markovian = markovian;
  const DriftKernel k =
      markovian ? phi1_markovian(grid, model) : phi1_compute(grid, model, z, z0, quad);
  diag.phi1_diag = k.diag;

  const Eigen::Index n = diag.phi1_diag.size();
  bool constant = true;
  for (Eigen::Index i = 1; i < n; ++i) constant = constant && (diag.phi1_diag[i] == diag.phi1_diag[0]);
  if (constant) {
    // k_variation must be exactly zero on a constant diagonal; the averaged
    // mean would reintroduce summation rounding.
    diag.mean_rate = diag.phi1_diag[0];
    diag.k_variation = 0.0;
    return diag;
  }
  diag.mean_rate = diag.phi1_diag.sum() / static_cast<double>(n);
  double var = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) var += std::norm(diag.phi1_diag[i] - diag.mean_rate);
  const double std_dev = std::sqrt(var / static_cast<double>(n));

  if (std_dev == 0.0) {
    diag.k_variation = 0.0;
  } else if (std::abs(diag.mean_rate) < 1e-300) {
    diag.k_variation = std::numeric_limits<double>::infinity();
  } else {
    diag.k_variation = std_dev / std::abs(diag.mean_rate);
  }
  return diag;
}

LossyGaussian lossy_coherent_wigner(const CoherentState& state, double loss) {
  if (!(loss > 0.0) || !(loss <= 1.0)) {
    throw InvalidArgumentError("lossy_coherent_wigner: loss must lie in (0, 1]");
  }
  LossyGaussian g;
  g.loss = loss;
  g.center = loss * state.zeta;
  return g;
}

double mean_photon_number(const LossyGaussian& g, const TransverseGrid& grid) {
  if (g.center.size() != grid.size()) throw DimensionError("mean_photon_number: size mismatch");
  return grid.weight() * g.center.squaredNorm();
}

} // namespace turbmom
