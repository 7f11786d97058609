#include "turbmom/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "turbmom/errors.hpp"
#include "turbmom/quadrature.hpp"

namespace turbmom {

namespace {
constexpr double kPsdPrefactor = 0.033;
}

double SpectrumModel::kappa0() const {
  return variant == SpectrumVariant::VonKarman ? 2.0 * std::numbers::pi / outer_scale : 0.0;
}

double SpectrumModel::kappa_m() const {
  if (variant == SpectrumVariant::Kolmogorov) return std::numeric_limits<double>::infinity();
  return 5.92 / inner_scale;
}

SpectrumModel kolmogorov(double cn2) {
  SpectrumModel m;
  m.variant = SpectrumVariant::Kolmogorov;
  m.cn2 = cn2;
  validate(m);
  return m;
}

SpectrumModel von_karman(double cn2, double outer_scale, double inner_scale) {
  SpectrumModel m;
  m.variant = SpectrumVariant::VonKarman;
  m.cn2 = cn2;
  m.outer_scale = outer_scale;
  m.inner_scale = inner_scale;
  validate(m);
  return m;
}

SpectrumModel tatarskii(double cn2, double inner_scale) {
  SpectrumModel m;
  m.variant = SpectrumVariant::Tatarskii;
  m.cn2 = cn2;
  m.inner_scale = inner_scale;
  validate(m);
  return m;
}

SpectrumModel flat_kz(SpectrumModel base, double cut) {
  if (!(cut > 0.0)) throw InvalidArgumentError("flat_kz: cut must be positive");
  base.flat_kz = true;
  base.flat_kz_cut = cut;
  return base;
}

void validate(const SpectrumModel& model) {
  if (!(model.cn2 >= 0.0)) throw InvalidArgumentError("spectrum: cn2 must be >= 0");
  switch (model.variant) {
    case SpectrumVariant::Kolmogorov:
      break;
    case SpectrumVariant::VonKarman:
      if (!(model.inner_scale > 0.0) || !(model.outer_scale > model.inner_scale)) {
        throw InvalidArgumentError("spectrum: von Karman needs L0 > l0 > 0");
      }
      break;
    case SpectrumVariant::Tatarskii:
      if (!(model.inner_scale > 0.0)) throw InvalidArgumentError("spectrum: Tatarskii needs l0 > 0");
      break;
  }
  if (model.flat_kz && !(model.flat_kz_cut > 0.0)) {
    throw InvalidArgumentError("spectrum: flat_kz_cut must be positive");
  }
}

double psd_3d(const SpectrumModel& model, double q2, double kz) {
  if (model.flat_kz) {
    if (std::abs(kz) > model.flat_kz_cut) return 0.0;
    SpectrumModel base = model;
    base.flat_kz = false;
    return psd_3d(base, q2, 0.0);
  }
  if (model.cn2 == 0.0) return 0.0;
  const double k2 = q2 + kz * kz;
  switch (model.variant) {
    case SpectrumVariant::Kolmogorov: {
      if (k2 == 0.0) throw SingularityError("psd_3d: Kolmogorov spectrum diverges at |k| = 0");
      return kPsdPrefactor * model.cn2 * std::pow(k2, -11.0 / 6.0);
    }
    case SpectrumVariant::VonKarman: {
      const double kap0 = model.kappa0();
      const double kapm = model.kappa_m();
      return kPsdPrefactor * model.cn2 * std::pow(k2 + kap0 * kap0, -11.0 / 6.0) *
             std::exp(-k2 / (kapm * kapm));
    }
    case SpectrumVariant::Tatarskii: {
      if (k2 == 0.0) throw SingularityError("psd_3d: Tatarskii spectrum diverges at |k| = 0");
      const double kapm = model.kappa_m();
      return kPsdPrefactor * model.cn2 * std::pow(k2, -11.0 / 6.0) * std::exp(-k2 / (kapm * kapm));
    }
  }
  return 0.0;
}

double psd_3d(const SpectrumModel& model, const Eigen::Vector3d& k) {
  return psd_3d(model, k.x() * k.x() + k.y() * k.y(), k.z());
}

double markovian_psd(const SpectrumModel& model, const Eigen::Vector2d& q) {
  return psd_3d(model, q.squaredNorm(), 0.0);
}

double markovian_psd_q2(const SpectrumModel& model, double q2) {
  return psd_3d(model, q2, 0.0);
}

double longitudinal_correlation_q2(const SpectrumModel& model, double q2, double zeta,
                                   const CorrelationTolerances& tol) {
  validate(model);
  if (model.cn2 == 0.0) return 0.0;

  if (model.flat_kz) {
    // B = Phi_n(q,0) sin(cut zeta) / (pi zeta): exact transform of the flat
    // truncated spectrum, no quadrature needed.
    const double base = markovian_psd_q2(model, q2);
    const double cut = model.flat_kz_cut;
    if (zeta == 0.0) return base * cut / std::numbers::pi;
    return base * std::sin(cut * zeta) / (std::numbers::pi * zeta);
  }

  const double kap0 = model.kappa0();
  const double a2 = q2 + kap0 * kap0;
  const double a = std::sqrt(a2);
  if (a == 0.0) {
    throw SingularityError("longitudinal_correlation: spectrum not k_z-integrable at q = 0");
  }

  const double az = a * std::abs(zeta);
  // K_{4/3}(a zeta) tail: below any representable relative tolerance.
  if (az > 45.0) return 0.0;

  // Truncation at 20 kappa_m: far beyond the inner-scale rolloff. Without a
  // rolloff the power-law tail bound (T/a)^(-8/3) sets T instead.
  const double kapm = model.kappa_m();
  double trunc = 4000.0 * a;
  if (std::isfinite(kapm)) trunc = std::min(trunc, std::max(20.0 * kapm, 8.0 * a));

  // Scale for the absolute floor: the exact zero-lag Matern value of the
  // rolloff-free spectrum, Gamma(4/3) / (2 sqrt(pi) Gamma(11/6)) a^(-8/3).
  const double b0_scale = kPsdPrefactor * model.cn2 * std::tgamma(4.0 / 3.0) /
                          (2.0 * std::sqrt(std::numbers::pi) * std::tgamma(11.0 / 6.0)) *
                          std::pow(a, -8.0 / 3.0);

  auto integrand = [&](double kz) { return psd_3d(model, q2, kz) * std::cos(kz * zeta); };

  // Geometric panel seeds resolve the |k_z| ~ a feature without wasting
  // depth on the long tail.
  std::vector<double> breaks{0.0};
  for (double edge = a; edge < trunc; edge *= 2.0) breaks.push_back(edge);
  breaks.push_back(trunc);

  const AdaptiveResult res = adaptive_gauss_kronrod(integrand, breaks, tol.rel_tol,
                                                    tol.rel_tol * b0_scale, tol.max_evals);
  if (!res.converged) {
    throw ConvergenceError("longitudinal_correlation: k_z quadrature did not converge",
                           res.error_estimate / std::numbers::pi);
  }
  // Even integrand: int_{-inf}^{inf} = 2 int_0^{inf}; measure dk_z / (2 pi).
  return res.value / std::numbers::pi;
}

double longitudinal_correlation(const SpectrumModel& model, const Eigen::Vector2d& q, double zeta,
                                const CorrelationTolerances& tol) {
  return longitudinal_correlation_q2(model, q.squaredNorm(), zeta, tol);
}

} // namespace turbmom
