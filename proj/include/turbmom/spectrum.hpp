#pragma once

#include <Eigen/Dense>
#include <limits>

namespace turbmom {

enum class SpectrumVariant { Kolmogorov, VonKarman, Tatarskii };

/// Refractive-index fluctuation power spectral density Phi_n(k), units m^3,
/// normalized so that <n~ n~> = int Phi_n(k) exp(-i k.r) d^3k / (2 pi)^3.
///
/// Kolmogorov:  0.033 Cn^2 |k|^(-11/3)
/// von Karman:  0.033 Cn^2 (|k|^2 + kappa0^2)^(-11/6) exp(-|k|^2 / kappa_m^2)
/// Tatarskii:   von Karman with kappa0 = 0
/// with kappa0 = 2 pi / L0 and kappa_m = 5.92 / l0.
struct SpectrumModel {
  SpectrumVariant variant = SpectrumVariant::VonKarman;
  double cn2 = 0.0;         // structure constant, m^(-2/3)
  double outer_scale = 0.0; // L0, m (von Karman)
  double inner_scale = 0.0; // l0, m (von Karman, Tatarskii)

  // Flat-in-k_z variant: Phi_n(q, k_z) frozen at k_z = 0 inside
  // |k_z| <= flat_kz_cut and zero beyond. Used to probe the Markovian limit.
  bool flat_kz = false;
  double flat_kz_cut = 0.0; // rad/m

  double kappa0() const;
  double kappa_m() const;
};

SpectrumModel kolmogorov(double cn2);
SpectrumModel von_karman(double cn2, double outer_scale, double inner_scale);
SpectrumModel tatarskii(double cn2, double inner_scale);

/// Freeze the k_z dependence of `base` at zero, truncated at |k_z| = cut.
SpectrumModel flat_kz(SpectrumModel base, double cut);

void validate(const SpectrumModel& model);

/// Phi_n at a 3-D wave vector. Throws SingularityError where the variant
/// diverges (|k| = 0 for Kolmogorov/Tatarskii).
double psd_3d(const SpectrumModel& model, const Eigen::Vector3d& k);

/// Same, split into transverse |q|^2 and longitudinal k_z.
double psd_3d(const SpectrumModel& model, double q2, double kz);

/// Markovian limit Phi_n(q, 0).
double markovian_psd(const SpectrumModel& model, const Eigen::Vector2d& q);
double markovian_psd_q2(const SpectrumModel& model, double q2);

struct CorrelationTolerances {
  double rel_tol = 1e-10;
  long max_evals = 2000000;
};

/// Longitudinal correlation B(q, zeta) = int exp(-i k_z zeta) Phi_n(q, k_z)
/// dk_z / (2 pi), units m^2. Real and even in zeta because Phi_n is even in
/// k_z. Throws ConvergenceError if the k_z quadrature cannot reach tolerance.
double longitudinal_correlation(const SpectrumModel& model, const Eigen::Vector2d& q, double zeta,
                                const CorrelationTolerances& tol = {});

/// Same, keyed by |q|^2 (every supported variant is isotropic).
double longitudinal_correlation_q2(const SpectrumModel& model, double q2, double zeta,
                                   const CorrelationTolerances& tol = {});

} // namespace turbmom
