#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <random>

#include "turbmom/errors.hpp"
#include "turbmom/grid.hpp"
#include "turbmom/quadrature.hpp"
#include "turbmom/states.hpp"

using namespace turbmom;
using Complex = std::complex<double>;

namespace {

// Direct numerical moment of the one-mode Gaussian exp(-2 w^2 theta |a|^2):
// radial quadrature of <|a|^(2p)> without any Wick machinery.
double radial_moment(double w2theta, int p) {
  auto num = adaptive_gauss_kronrod(
      [&](double r) { return std::pow(r, 2 * p + 1) * std::exp(-2.0 * w2theta * r * r); }, 0.0,
      20.0 / std::sqrt(w2theta), 1e-12, 1e-300, 200000);
  auto den = adaptive_gauss_kronrod(
      [&](double r) { return r * std::exp(-2.0 * w2theta * r * r); }, 0.0,
      20.0 / std::sqrt(w2theta), 1e-12, 1e-300, 200000);
  return num.value / den.value;
}

} // namespace

TEST_CASE("thermal_from_modes basics") {
  const TransverseGrid g = build_grid(2, 1.0, 100.0);
  const double w = g.weight();

  // Vacuum: Theta^{-1} is the grid delta.
  const ThermalState vac = thermal_from_modes(g, Eigen::VectorXd::Zero(4));
  CHECK((vac.theta_inv - grid_delta(g).values).norm() < 1e-14 / w);
  for (int i = 0; i < 4; ++i) CHECK(mode_photon_number(vac, i) == doctest::Approx(0.0));

  // Uniform occupation: proportional to the grid delta.
  const ThermalState warm = thermal_from_modes(g, Eigen::VectorXd::Constant(4, 1.5));
  CHECK((warm.theta_inv - 4.0 * grid_delta(g).values).norm() < 1e-12 / w);
  CHECK(mode_photon_number(warm, 2) == doctest::Approx(1.5).epsilon(1e-12));

  // Single hot mode enlarges one diagonal entry.
  Eigen::VectorXd occ = Eigen::VectorXd::Zero(4);
  occ[1] = 3.0;
  const ThermalState hot = thermal_from_modes(g, occ);
  CHECK(hot.theta_inv(1, 1).real() == doctest::Approx(7.0 / w));
  CHECK(hot.theta_inv(0, 0).real() == doctest::Approx(1.0 / w));

  occ[1] = -0.2;
  CHECK_THROWS_AS(thermal_from_modes(g, occ), InvalidArgumentError);
}

TEST_CASE("make_thermal_state validates hermiticity and positivity") {
  const TransverseGrid g = build_grid(2, 1.0, 100.0);
  Eigen::MatrixXcd bad = grid_delta(g).values;
  bad(0, 1) = Complex(0.3, 0.1); // not hermitian
  CHECK_THROWS_AS(make_thermal_state(g, bad, 0.0), InvalidArgumentError);

  Eigen::MatrixXcd indefinite = grid_delta(g).values;
  indefinite(0, 0) = -1.0;
  CHECK_THROWS_AS(make_thermal_state(g, indefinite, 0.0), InvalidArgumentError);
}

TEST_CASE("second moment is half the inverse kernel") {
  const TransverseGrid g = build_grid(2, 1.0, 100.0);
  const ThermalState s = thermal_from_modes(g, Eigen::VectorXd::Constant(4, 0.5));
  const Eigen::MatrixXcd m = second_moment(s);
  CHECK((m - 0.5 * s.theta_inv).norm() == 0.0);
  CHECK(hermiticity_defect(m) < 1e-15);
  // w-weighted traces track each other.
  CHECK(weighted_trace(m, s.weight).real() ==
        doctest::Approx(0.5 * weighted_trace(s.theta_inv, s.weight).real()));
}

TEST_CASE("gaussian_moment pair rule and vanishing moments") {
  const TransverseGrid g = build_grid(2, 1.0, 100.0);
  std::mt19937 engine(5);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) t(r, c) = Complex(u(engine), u(engine));
  t = (t * t.adjoint()).eval(); // Hermitian PSD
  t += 2.0 * Eigen::MatrixXcd::Identity(4, 4) / g.weight();
  const ThermalState s = make_thermal_state(g, t, 0.0);

  // Order 2: <a*(K) a(K')> = Theta^{-1}(K', K) / 2.
  const std::array<FieldFactor, 2> pair{FieldFactor{1, true}, FieldFactor{3, false}};
  CHECK(gaussian_moment(s, pair) == 0.5 * s.theta_inv(3, 1));

  // Odd order vanishes exactly.
  const std::array<FieldFactor, 3> odd{FieldFactor{0, true}, FieldFactor{1, false},
                                       FieldFactor{2, false}};
  CHECK(gaussian_moment(s, odd) == Complex(0.0, 0.0));

  // Unbalanced even order vanishes exactly.
  const std::array<FieldFactor, 2> unbalanced{FieldFactor{0, true}, FieldFactor{1, true}};
  CHECK(gaussian_moment(s, unbalanced) == Complex(0.0, 0.0));

  // Order 0 is the normalization.
  CHECK(gaussian_moment(s, {}) == Complex(1.0, 0.0));

  CHECK_THROWS_AS(gaussian_moment(s, std::array<FieldFactor, 1>{FieldFactor{9, true}}),
                  InvalidArgumentError);
}

TEST_CASE("fourth moment of a single mode matches direct radial integration") {
  const TransverseGrid g = build_grid(2, 1.0, 100.0);
  const double w = g.weight();
  // Diagonal state: mode 0 decouples, so the 1-D complex Gaussian oracle
  // applies to moments built on index 0 alone.
  Eigen::VectorXd occ(4);
  occ << 0.7, 0.0, 0.3, 1.1;
  const ThermalState s = thermal_from_modes(g, occ);
  const double theta00 = 1.0 / (s.theta_inv(0, 0).real() * w * w); // diamond inverse
  const double w2theta = w * w * theta00;

  const double c = 0.5 * s.theta_inv(0, 0).real();
  const std::array<FieldFactor, 4> quartic{FieldFactor{0, true}, FieldFactor{0, false},
                                           FieldFactor{0, true}, FieldFactor{0, false}};
  const Complex got = gaussian_moment(s, quartic);
  CHECK(got.imag() == 0.0);
  // Wick: 2 c^2.
  CHECK(got.real() == doctest::Approx(2.0 * c * c).epsilon(1e-14));
  // Independent radial integral: <|a|^4> over exp(-2 w^2 theta |a|^2).
  CHECK(got.real() == doctest::Approx(radial_moment(w2theta, 2)).epsilon(1e-9));
  // And the pair moment itself.
  CHECK(c == doctest::Approx(radial_moment(w2theta, 1)).epsilon(1e-9));
}

TEST_CASE("Wick pairing matches direct 2-mode Gaussian integration") {
  const TransverseGrid g = build_grid(2, 1.0, 100.0);
  const double w = g.weight();

  // Kernel coupling modes 0 and 1 only; the rest vacuum and decoupled.
  Eigen::MatrixXcd t = grid_delta(g).values;
  t(0, 0) = 1.3 / w;
  t(1, 1) = 0.8 / w;
  t(0, 1) = Complex(0.25, 0.15) / w;
  t(1, 0) = std::conj(t(0, 1));
  const ThermalState s = make_thermal_state(g, t, 0.0);

  // Direct 4-real-dimension quadrature over the coupled block of
  // W ~ exp(-2 w^2 a^dag T a), T the 2x2 diamond kernel of Theta.
  const Eigen::Matrix2cd tinv_block = s.theta_inv.topLeftCorner<2, 2>();
  const Eigen::Matrix2cd t_block = tinv_block.inverse() / (w * w); // diamond inverse
  const double scale = std::sqrt(t_block(1, 1).real() * w * w);

  const GaussRule line = composite_gauss_legendre(-4.5 / scale, 4.5 / scale, 3, 12);
  const int nn = static_cast<int>(line.nodes.size());

  Complex num01 = 0.0, num0011 = 0.0, num00 = 0.0;
  double den = 0.0;
  for (int i0 = 0; i0 < nn; ++i0)
    for (int i1 = 0; i1 < nn; ++i1)
      for (int i2 = 0; i2 < nn; ++i2)
        for (int i3 = 0; i3 < nn; ++i3) {
          const Complex a0(line.nodes[i0], line.nodes[i1]);
          const Complex a1(line.nodes[i2], line.nodes[i3]);
          Eigen::Vector2cd a;
          a << a0, a1;
          const double expo = -2.0 * w * w * std::real((a.adjoint() * t_block * a)(0, 0));
          const double wgt = line.weights[i0] * line.weights[i1] * line.weights[i2] *
                             line.weights[i3] * std::exp(expo);
          den += wgt;
          num01 += wgt * std::conj(a0) * a1;
          num00 += wgt * std::conj(a0) * a0;
          num0011 += wgt * std::conj(a0) * a0 * std::conj(a1) * a1;
        }

  const Complex direct01 = num01 / den;
  const Complex direct00 = num00 / den;
  const Complex direct0011 = num0011 / den;

  const std::array<FieldFactor, 2> p01{FieldFactor{0, true}, FieldFactor{1, false}};
  const std::array<FieldFactor, 2> p00{FieldFactor{0, true}, FieldFactor{0, false}};
  const std::array<FieldFactor, 4> q0011{FieldFactor{0, true}, FieldFactor{0, false},
                                         FieldFactor{1, true}, FieldFactor{1, false}};
  CHECK(std::abs(gaussian_moment(s, p01) - direct01) < 1e-6 * std::abs(direct01));
  CHECK(std::abs(gaussian_moment(s, p00) - direct00) < 1e-6 * std::abs(direct00));
  CHECK(std::abs(gaussian_moment(s, q0011) - direct0011) < 1e-6 * std::abs(direct0011));
}

TEST_CASE("moments transform covariantly under unitaries") {
  const TransverseGrid g = build_grid(2, 1.0, 100.0);
  std::mt19937 engine(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXcd raw(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) raw(r, c) = Complex(u(engine), u(engine));
  const Eigen::MatrixXcd q = Eigen::HouseholderQR<Eigen::MatrixXcd>(raw).householderQ();

  Eigen::VectorXd occ(4);
  occ << 0.2, 1.0, 0.0, 2.5;
  const ThermalState s = thermal_from_modes(g, occ);
  const ThermalState rotated = make_thermal_state(g, q * s.theta_inv * q.adjoint(), 0.0);

  const Eigen::MatrixXcd expected = q * second_moment(s) * q.adjoint();
  CHECK((second_moment(rotated) - expected).norm() / expected.norm() < 1e-13);
}
