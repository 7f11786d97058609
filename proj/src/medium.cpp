#include "turbmom/medium.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>

#include "turbmom/errors.hpp"
#include "turbmom/rng.hpp"

namespace turbmom {

namespace {

using Complex = std::complex<double>;

double fft_wavenumber(int m, int n, double d) {
  const int signed_m = (m <= n / 2) ? m : m - n;
  return 2.0 * std::numbers::pi * signed_m / (n * d);
}

void check_inputs(const SpectrumModel& model, const MediumDims& dims,
                  const MediumSpacings& spacings) {
  validate(model);
  if (model.variant == SpectrumVariant::Kolmogorov) {
    throw InvalidModelError("sample_medium: Kolmogorov is singular at k = 0; use von Karman or Tatarskii");
  }
  if (dims.nx < 4 || dims.ny < 4 || dims.nz < 4) {
    throw InvalidArgumentError("sample_medium: dims must be >= 4 per axis");
  }
  if (!(spacings.dx > 0.0) || !(spacings.dy > 0.0) || !(spacings.dz > 0.0)) {
    throw InvalidArgumentError("sample_medium: spacings must be positive");
  }
}

// In-place complex FFT along each axis of an (nx, ny, nz) array, x fastest.
void fft3_forward(std::vector<Complex>& a, int nx, int ny, int nz) {
  Eigen::FFT<double> fft;
  std::vector<Complex> in, out;
  if (nx > 1) {
    in.resize(nx);
    out.resize(nx);
    for (int iz = 0; iz < nz; ++iz) {
      for (int iy = 0; iy < ny; ++iy) {
        Complex* row = a.data() + (static_cast<std::size_t>(iz) * ny + iy) * nx;
        std::copy(row, row + nx, in.begin());
        fft.fwd(out, in);
        std::copy(out.begin(), out.end(), row);
      }
    }
  }
  if (ny > 1) {
    in.resize(ny);
    out.resize(ny);
    for (int iz = 0; iz < nz; ++iz) {
      for (int ix = 0; ix < nx; ++ix) {
        for (int iy = 0; iy < ny; ++iy) in[iy] = a[(static_cast<std::size_t>(iz) * ny + iy) * nx + ix];
        fft.fwd(out, in);
        for (int iy = 0; iy < ny; ++iy) a[(static_cast<std::size_t>(iz) * ny + iy) * nx + ix] = out[iy];
      }
    }
  }
  if (nz > 1) {
    in.resize(nz);
    out.resize(nz);
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < nx; ++ix) {
        for (int iz = 0; iz < nz; ++iz) in[iz] = a[(static_cast<std::size_t>(iz) * ny + iy) * nx + ix];
        fft.fwd(out, in);
        for (int iz = 0; iz < nz; ++iz) a[(static_cast<std::size_t>(iz) * ny + iy) * nx + ix] = out[iz];
      }
    }
  }
}

// Fill a Hermitian-symmetric unit-variance complex normal array eta with
// eta(-k) = conj(eta(k)), so the synthesized field is real. Modes are visited
// in linear order; self-conjugate modes are real with unit variance.
void fill_hermitian_noise(std::vector<Complex>& eta, int nx, int ny, int nz, GaussianRng& rng) {
  auto linear = [&](int ix, int iy, int iz) {
    return (static_cast<std::size_t>(iz) * ny + iy) * nx + ix;
  };
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int iz = 0; iz < nz; ++iz) {
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < nx; ++ix) {
        const std::size_t m = linear(ix, iy, iz);
        const std::size_t p = linear((nx - ix) % nx, (ny - iy) % ny, (nz - iz) % nz);
        if (p < m) continue; // partner already drew for us
        if (p == m) {
          eta[m] = Complex(rng.normal(), 0.0);
        } else {
          const double g1 = rng.normal();
          const double g2 = rng.normal();
          eta[m] = Complex(g1 * inv_sqrt2, g2 * inv_sqrt2);
          eta[p] = std::conj(eta[m]);
        }
      }
    }
  }
}

} // namespace

Medium3D sample_medium(const SpectrumModel& model, const MediumDims& dims,
                       const MediumSpacings& spacings, std::uint64_t seed, bool thin_screen) {
  check_inputs(model, dims, spacings);
  const int nx = dims.nx, ny = dims.ny, nz = dims.nz;
  const std::size_t total = static_cast<std::size_t>(nx) * ny * nz;

  Medium3D medium;
  medium.nx = nx;
  medium.ny = ny;
  medium.nz = nz;
  medium.dx = spacings.dx;
  medium.dy = spacings.dy;
  medium.dz = spacings.dz;
  medium.seed = seed;
  medium.values.assign(total, 0.0);

  if (model.cn2 == 0.0) return medium;

  GaussianRng rng(seed);
  std::vector<Complex> spec(total, Complex(0.0, 0.0));

  if (!thin_screen) {
    fill_hermitian_noise(spec, nx, ny, nz, rng);
    const double volume = (nx * spacings.dx) * (ny * spacings.dy) * (nz * spacings.dz);
    for (int iz = 0; iz < nz; ++iz) {
      const double kz = fft_wavenumber(iz, nz, spacings.dz);
      for (int iy = 0; iy < ny; ++iy) {
        const double ky = fft_wavenumber(iy, ny, spacings.dy);
        for (int ix = 0; ix < nx; ++ix) {
          const double kx = fft_wavenumber(ix, nx, spacings.dx);
          const std::size_t m = (static_cast<std::size_t>(iz) * ny + iy) * nx + ix;
          double psd = 0.0;
          if (kx == 0.0 && ky == 0.0 && kz == 0.0 &&
              model.variant == SpectrumVariant::Tatarskii) {
            psd = 0.0; // infrared divergence cut at the box scale
          } else {
            psd = psd_3d(model, kx * kx + ky * ky, kz);
          }
          spec[m] *= std::sqrt(psd / volume);
        }
      }
    }
    fft3_forward(spec, nx, ny, nz);
  } else {
    // Independent planes sampled from the Markovian spectrum Phi_n(q, 0)/dz.
    const double area = (nx * spacings.dx) * (ny * spacings.dy);
    std::vector<Complex> plane(static_cast<std::size_t>(nx) * ny);
    for (int iz = 0; iz < nz; ++iz) {
      fill_hermitian_noise(plane, nx, ny, 1, rng);
      for (int iy = 0; iy < ny; ++iy) {
        const double ky = fft_wavenumber(iy, ny, spacings.dy);
        for (int ix = 0; ix < nx; ++ix) {
          const double kx = fft_wavenumber(ix, nx, spacings.dx);
          double psd = 0.0;
          if (kx == 0.0 && ky == 0.0 && model.variant == SpectrumVariant::Tatarskii) {
            psd = 0.0;
          } else {
            psd = markovian_psd_q2(model, kx * kx + ky * ky);
          }
          plane[static_cast<std::size_t>(iy) * nx + ix] *=
              std::sqrt(psd / (spacings.dz * area));
        }
      }
      fft3_forward(plane, nx, ny, 1);
      std::copy(plane.begin(), plane.end(),
                spec.begin() + static_cast<std::size_t>(iz) * nx * ny);
    }
  }

  double max_imag = 0.0, sum = 0.0, max_real = 0.0;
  for (std::size_t m = 0; m < total; ++m) {
    medium.values[m] = spec[m].real();
    max_imag = std::max(max_imag, std::abs(spec[m].imag()));
    max_real = std::max(max_real, std::abs(spec[m].real()));
    sum += spec[m].real();
  }
  medium.mean = sum / static_cast<double>(total);
  medium.max_imag_residue = max_imag;
  if (max_real > 0.0 && max_imag > 1e-10 * max_real) {
    throw IntegrityError("sample_medium: Hermitian symmetry broken, field not real");
  }
  return medium;
}

double medium_expected_variance(const SpectrumModel& model, const MediumDims& dims,
                                const MediumSpacings& spacings, bool thin_screen) {
  check_inputs(model, dims, spacings);
  if (model.cn2 == 0.0) return 0.0;
  const int nx = dims.nx, ny = dims.ny, nz = dims.nz;
  double acc = 0.0;
  if (!thin_screen) {
    const double volume = (nx * spacings.dx) * (ny * spacings.dy) * (nz * spacings.dz);
    for (int iz = 0; iz < nz; ++iz) {
      const double kz = fft_wavenumber(iz, nz, spacings.dz);
      for (int iy = 0; iy < ny; ++iy) {
        const double ky = fft_wavenumber(iy, ny, spacings.dy);
        for (int ix = 0; ix < nx; ++ix) {
          const double kx = fft_wavenumber(ix, nx, spacings.dx);
          if (kx == 0.0 && ky == 0.0 && kz == 0.0 && model.variant == SpectrumVariant::Tatarskii) {
            continue;
          }
          acc += psd_3d(model, kx * kx + ky * ky, kz) / volume;
        }
      }
    }
  } else {
    const double area = (nx * spacings.dx) * (ny * spacings.dy);
    for (int iy = 0; iy < ny; ++iy) {
      const double ky = fft_wavenumber(iy, ny, spacings.dy);
      for (int ix = 0; ix < nx; ++ix) {
        const double kx = fft_wavenumber(ix, nx, spacings.dx);
        if (kx == 0.0 && ky == 0.0 && model.variant == SpectrumVariant::Tatarskii) continue;
        acc += markovian_psd_q2(model, kx * kx + ky * ky) / (spacings.dz * area);
      }
    }
  }
  return acc;
}

} // namespace turbmom
