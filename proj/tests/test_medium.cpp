#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "turbmom/errors.hpp"
#include "turbmom/medium.hpp"
#include "turbmom/quadrature.hpp"
#include "turbmom/rng.hpp"
#include "turbmom/spectrum.hpp"

using namespace turbmom;

TEST_CASE("medium sampling basics") {
  const SpectrumModel model = von_karman(1e-12, 0.5, 0.08);
  const MediumDims dims{8, 8, 16};
  const MediumSpacings sp{0.05, 0.05, 0.02};

  const Medium3D a = sample_medium(model, dims, sp, 42);
  const Medium3D b = sample_medium(model, dims, sp, 42);
  CHECK(a.values == b.values); // bit-identical for equal seeds

  const Medium3D c = sample_medium(model, dims, sp, 43);
  CHECK(a.values != c.values);

  // Real field: imaginary residue at rounding level.
  double scale = 0.0;
  for (double v : a.values) scale = std::max(scale, std::abs(v));
  CHECK(a.max_imag_residue < 1e-12 * scale);

  const Medium3D zero = sample_medium(von_karman(0.0, 0.5, 0.08), dims, sp, 7);
  for (double v : zero.values) CHECK(v == 0.0);

  CHECK_THROWS_AS(sample_medium(kolmogorov(1e-12), dims, sp, 1), InvalidModelError);
  CHECK_THROWS_AS(sample_medium(model, MediumDims{2, 8, 8}, sp, 1), InvalidArgumentError);
  CHECK_THROWS_AS(sample_medium(model, dims, MediumSpacings{0.0, 0.1, 0.1}, 1),
                  InvalidArgumentError);
}

TEST_CASE("sample variance matches the band-limited spectral integral") {
  const SpectrumModel model = von_karman(2e-12, 0.5, 0.08);
  const MediumDims dims{64, 64, 64};
  const MediumSpacings sp{0.02, 0.02, 0.02};

  // Independent band-limited quadrature of int Phi_n d^3k / (2 pi)^3 over
  // the resolved band [-pi/d, pi/d]^3.
  const double bx = std::numbers::pi / sp.dx;
  const GaussRule line = composite_gauss_legendre(-bx, bx, 10, 10);
  const int nn = static_cast<int>(line.nodes.size());
  double integral = 0.0;
  for (int i = 0; i < nn; ++i) {
    for (int j = 0; j < nn; ++j) {
      const double q2 = line.nodes[i] * line.nodes[i] + line.nodes[j] * line.nodes[j];
      double inner = 0.0;
      for (int k = 0; k < nn; ++k) {
        inner += line.weights[k] * psd_3d(model, q2, line.nodes[k]);
      }
      integral += line.weights[i] * line.weights[j] * inner;
    }
  }
  const double tp = 2.0 * std::numbers::pi;
  integral /= tp * tp * tp;

  // The synthesized field's exact expected variance (mode sum) should agree
  // with the continuum integral on this resolution...
  const double expected = medium_expected_variance(model, dims, sp);
  CHECK(expected == doctest::Approx(integral).epsilon(0.05));

  // ...and the sampled variance with the mode sum, statistically.
  const int n_real = 100;
  double acc = 0.0;
  for (int r = 0; r < n_real; ++r) {
    const Medium3D m = sample_medium(model, dims, sp, mix_seed(99, r));
    double s2 = 0.0;
    for (double v : m.values) s2 += v * v;
    acc += s2 / static_cast<double>(m.values.size());
  }
  acc /= n_real;
  CHECK(acc == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("per-realization mean shrinks with volume") {
  const SpectrumModel model = von_karman(1e-12, 0.3, 0.05);
  double small_mean = 0.0, large_mean = 0.0;
  for (int r = 0; r < 8; ++r) {
    small_mean += std::abs(
        sample_medium(model, MediumDims{8, 8, 8}, MediumSpacings{0.05, 0.05, 0.05}, mix_seed(5, r))
            .mean);
    large_mean += std::abs(sample_medium(model, MediumDims{32, 32, 32},
                                         MediumSpacings{0.05, 0.05, 0.05}, mix_seed(6, r))
                               .mean);
  }
  CHECK(large_mean < small_mean);
}

TEST_CASE("longitudinal autocorrelation carries the non-Markovian shape") {
  // Correlated 3-D medium: the sampled z-autocorrelation must match the
  // transverse-band-integrated longitudinal correlation profile.
  const SpectrumModel model = von_karman(1e-12, 0.3, 0.05);
  const int nx = 16, ny = 16, nz = 256;
  const MediumDims dims{nx, ny, nz};
  const MediumSpacings sp{0.04, 0.04, 0.01};

  const int max_lag = 12;
  std::vector<double> corr(static_cast<std::size_t>(max_lag) + 1, 0.0);
  const int n_real = 60;
  for (int r = 0; r < n_real; ++r) {
    const Medium3D m = sample_medium(model, dims, sp, mix_seed(1234, r));
    for (int lag = 0; lag <= max_lag; ++lag) {
      double acc = 0.0;
      for (int iz = 0; iz < nz; ++iz) {
        const int jz = (iz + lag) % nz;
        for (int iy = 0; iy < ny; ++iy)
          for (int ix = 0; ix < nx; ++ix) acc += m.at(ix, iy, iz) * m.at(ix, iy, jz);
      }
      corr[static_cast<std::size_t>(lag)] += acc / (static_cast<double>(nx) * ny * nz);
    }
  }

  // Band-integrated theory curve: sum over the resolved transverse modes of
  // B(q, zeta) with the box mode weight.
  auto band_b = [&](double zeta) {
    double acc = 0.0;
    for (int iy = 0; iy < ny; ++iy) {
      const int my = (iy <= ny / 2) ? iy : iy - ny;
      const double qy = 2.0 * std::numbers::pi * my / (ny * sp.dy);
      for (int ix = 0; ix < nx; ++ix) {
        const int mx = (ix <= nx / 2) ? ix : ix - nx;
        const double qx = 2.0 * std::numbers::pi * mx / (nx * sp.dx);
        acc += longitudinal_correlation_q2(model, qx * qx + qy * qy, zeta) /
               ((nx * sp.dx) * (ny * sp.dy));
      }
    }
    return acc;
  };

  const double c0 = corr[0] / n_real;
  const double t0 = band_b(0.0);
  for (int lag = 1; lag <= max_lag; ++lag) {
    const double sampled_shape = (corr[static_cast<std::size_t>(lag)] / n_real) / c0;
    const double theory_shape = band_b(lag * sp.dz) / t0;
    CHECK(std::abs(sampled_shape - theory_shape) < 0.10);
  }
  // The profile is a genuine correlation: decaying, substantial at one lag.
  CHECK(band_b(sp.dz) / t0 > 0.5);
  CHECK(band_b(max_lag * sp.dz) / t0 < 0.8);
}

TEST_CASE("thin screens are delta-correlated along z") {
  const SpectrumModel model = von_karman(1e-12, 0.3, 0.05);
  const MediumDims dims{16, 16, 64};
  const MediumSpacings sp{0.04, 0.04, 0.01};

  double c0 = 0.0, c1 = 0.0;
  const int n_real = 40;
  for (int r = 0; r < n_real; ++r) {
    const Medium3D m = sample_medium(model, dims, sp, mix_seed(777, r), true);
    for (int iz = 0; iz < dims.nz; ++iz) {
      const int jz = (iz + 1) % dims.nz;
      for (int iy = 0; iy < dims.ny; ++iy) {
        for (int ix = 0; ix < dims.nx; ++ix) {
          c0 += m.at(ix, iy, iz) * m.at(ix, iy, iz);
          c1 += m.at(ix, iy, iz) * m.at(ix, iy, jz);
        }
      }
    }
  }
  CHECK(std::abs(c1) < 0.02 * c0);

  // Variance bookkeeping matches the Markovian mode sum.
  const double expected = medium_expected_variance(model, dims, sp, true);
  double acc = 0.0;
  long count = 0;
  for (int r = 0; r < n_real; ++r) {
    const Medium3D m = sample_medium(model, dims, sp, mix_seed(778, r), true);
    for (double v : m.values) {
      acc += v * v;
      ++count;
    }
  }
  CHECK(acc / static_cast<double>(count) == doctest::Approx(expected).epsilon(0.05));
}
