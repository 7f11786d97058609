#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "turbmom/spectrum.hpp"

namespace turbmom {

/// One realization of the 3-D refractive-index fluctuation field on a
/// periodic box, synthesized spectrally so that
/// <n~(x1) n~(x2)> -> int Phi_n(k) exp(-i k.(x1-x2)) d^3k / (2 pi)^3
/// over the resolved band. Values are real by Hermitian spectral symmetry.
/// Storage is x-fastest: values[(iz * ny + iy) * nx + ix].
struct Medium3D {
  int nx = 0, ny = 0, nz = 0;
  double dx = 0.0, dy = 0.0, dz = 0.0; // m
  std::vector<double> values;
  std::uint64_t seed = 0;
  double mean = 0.0;          // per-realization volume mean
  double max_imag_residue = 0.0; // leftover imaginary part of the transform

  double at(int ix, int iy, int iz) const {
    return values[(static_cast<std::size_t>(iz) * ny + iy) * nx + ix];
  }
};

struct MediumDims {
  int nx = 0, ny = 0, nz = 0;
};
struct MediumSpacings {
  double dx = 0.0, dy = 0.0, dz = 0.0;
};

/// Draw one medium realization. Deterministic for a fixed seed. The
/// Kolmogorov spectrum is rejected (singular at k = 0); the Tatarskii DC mode
/// is zeroed (its infrared divergence is cut at the box scale).
///
/// With thin_screen set, planes are generated independently from the
/// Markovian spectrum Phi_n(q, 0) / dz: the delta-correlated special case.
Medium3D sample_medium(const SpectrumModel& model, const MediumDims& dims,
                       const MediumSpacings& spacings, std::uint64_t seed,
                       bool thin_screen = false);

/// Expected variance of the synthesized field: the band-limited mode sum
/// sum_k Phi_n(k) / V. Useful to compare against sampled statistics.
double medium_expected_variance(const SpectrumModel& model, const MediumDims& dims,
                                const MediumSpacings& spacings, bool thin_screen = false);

} // namespace turbmom
