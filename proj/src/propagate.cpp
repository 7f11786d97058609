#include "turbmom/propagate.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>

#include "turbmom/errors.hpp"

namespace turbmom {

namespace {

using Complex = std::complex<double>;

// The grid pairs K_m = (2m - n + 1) delta_k / 2 with X_j = (2j - n + 1) dx / 2,
// dx = 2 pi / (n delta_k), so exp(-i K.X) factors into a plain DFT between
// half-integer phase ramps. ramp[m] = exp(i pi (n-1) m / n) together with the
// constant exp(-i pi (n-1)^2 / (2n)) per axis.
struct OffsetDft {
  int n = 0;
  double weight = 0.0; // spectral measure w
  double dx = 0.0;
  std::vector<Complex> ramp;
  Complex axis_const{1.0, 0.0};

  explicit OffsetDft(const TransverseGrid& grid) {
    n = grid.n_side;
    weight = grid.weight();
    dx = 2.0 * std::numbers::pi / (n * grid.delta_k);
    ramp.resize(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
      ramp[static_cast<std::size_t>(m)] =
          std::polar(1.0, std::numbers::pi * static_cast<double>(n - 1) * m / n);
    }
    axis_const = std::polar(
        1.0, -std::numbers::pi * static_cast<double>(n - 1) * (n - 1) / (2.0 * n));
  }
};

// Forward: g(X_j) = w sum_m G(K_m) exp(-i K_m . X_j), both axes.
Eigen::VectorXcd offset_dft_to_position(const OffsetDft& d, const Eigen::VectorXcd& gk) {
  const int n = d.n;
  Eigen::MatrixXcd a(n, n); // (ix, iy) layout: row = x index
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy) a(ix, iy) = gk[ix * n + iy];

  Eigen::FFT<double> fft;
  std::vector<Complex> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
  // exp(-i (2 pi/n) m j) with pre/post ramps, per axis.
  auto transform_axis = [&](bool rows) {
    for (int s = 0; s < n; ++s) {
      for (int t = 0; t < n; ++t) {
        const Complex v = rows ? a(t, s) : a(s, t);
        in[static_cast<std::size_t>(t)] = v * d.ramp[static_cast<std::size_t>(t)];
      }
      fft.fwd(out, in);
      for (int t = 0; t < n; ++t) {
        const Complex v = out[static_cast<std::size_t>(t)] * d.ramp[static_cast<std::size_t>(t)] *
                          d.axis_const;
        (rows ? a(t, s) : a(s, t)) = v;
      }
    }
  };
  transform_axis(true);  // x axis
  transform_axis(false); // y axis

  Eigen::VectorXcd gx(n * n);
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy) gx[ix * n + iy] = d.weight * a(ix, iy);
  return gx;
}

// Inverse: G(K_m) = dx^2 sum_j g(X_j) exp(+i K_m . X_j).
Eigen::VectorXcd offset_dft_to_spectrum(const OffsetDft& d, const Eigen::VectorXcd& gx) {
  const int n = d.n;
  Eigen::MatrixXcd a(n, n);
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy) a(ix, iy) = gx[ix * n + iy];

  Eigen::FFT<double> fft;
  std::vector<Complex> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
  auto transform_axis = [&](bool rows) {
    for (int s = 0; s < n; ++s) {
      for (int t = 0; t < n; ++t) {
        const Complex v = rows ? a(t, s) : a(s, t);
        in[static_cast<std::size_t>(t)] = v * std::conj(d.ramp[static_cast<std::size_t>(t)]);
      }
      fft.inv(out, in); // exp(+i 2 pi m j / n) / n
      for (int t = 0; t < n; ++t) {
        const Complex v = out[static_cast<std::size_t>(t)] *
                          std::conj(d.ramp[static_cast<std::size_t>(t)] * d.axis_const) *
                          static_cast<double>(n);
        (rows ? a(t, s) : a(s, t)) = v;
      }
    }
  };
  transform_axis(true);
  transform_axis(false);

  Eigen::VectorXcd gk(n * n);
  const double scale = d.dx * d.dx;
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy) gk[ix * n + iy] = scale * a(ix, iy);
  return gk;
}

} // namespace

Eigen::VectorXcd spectrum_to_position(const TransverseGrid& grid, const Eigen::VectorXcd& gk) {
  if (gk.size() != grid.size()) throw DimensionError("spectrum_to_position: size mismatch");
  return offset_dft_to_position(OffsetDft(grid), gk);
}

Eigen::VectorXcd position_to_spectrum(const TransverseGrid& grid, const Eigen::VectorXcd& gx) {
  if (gx.size() != grid.size()) throw DimensionError("position_to_spectrum: size mismatch");
  return offset_dft_to_spectrum(OffsetDft(grid), gx);
}

FieldRealization propagate_classical(const FieldRealization& initial, const Medium3D& medium,
                                     const TransverseGrid& grid, PropagationTelemetry* telemetry) {
  const int n = grid.n_side;
  if (initial.gc.size() != grid.size()) {
    throw DimensionError("propagate_classical: field does not match grid");
  }
  if (medium.nx != n || medium.ny != n) {
    throw DimensionError("propagate_classical: medium transverse dims must match the grid");
  }
  const OffsetDft dft(grid);
  if (std::abs(medium.dx - dft.dx) > 1e-9 * dft.dx || std::abs(medium.dy - dft.dx) > 1e-9 * dft.dx) {
    throw DimensionError("propagate_classical: medium spacing incompatible with the grid");
  }
  const double k0 = grid.k0;
  const double z0 = initial.z;
  const double dz = medium.dz;

  // Full-spectrum field G = exp(+i z |K|^2 / 2k) G_c.
  Eigen::VectorXcd g(grid.size());
  for (int m = 0; m < grid.size(); ++m) {
    g[m] = initial.gc[m] * std::polar(1.0, z0 * grid.norm2(m) / (2.0 * k0));
  }

  const double w = grid.weight();
  const double norm0 = w * g.squaredNorm();
  double max_drift = 0.0;

  Eigen::VectorXcd free_half(grid.size());
  for (int m = 0; m < grid.size(); ++m) {
    free_half[m] = std::polar(1.0, grid.norm2(m) * dz / (4.0 * k0));
  }

  for (int plane = 0; plane < medium.nz; ++plane) {
    g.array() *= free_half.array();
    Eigen::VectorXcd gx = offset_dft_to_position(dft, g);
    const double* screen = medium.values.data() + static_cast<std::size_t>(plane) * n * n;
    for (int ix = 0; ix < n; ++ix) {
      for (int iy = 0; iy < n; ++iy) {
        // medium storage is x-fastest, field storage is y-fastest
        gx[ix * n + iy] *= std::polar(1.0, -k0 * screen[iy * n + ix] * dz);
      }
    }
    g = offset_dft_to_spectrum(dft, gx);
    g.array() *= free_half.array();

    if (norm0 > 0.0) {
      const double drift = std::abs(w * g.squaredNorm() / norm0 - 1.0);
      max_drift = std::max(max_drift, drift);
      if (drift > 1e-10) {
        throw IntegrityError("propagate_classical: norm drift " + std::to_string(drift));
      }
    }
  }

  FieldRealization out;
  out.z = z0 + medium.nz * dz;
  out.gc.resize(grid.size());
  for (int m = 0; m < grid.size(); ++m) {
    out.gc[m] = g[m] * std::polar(1.0, -out.z * grid.norm2(m) / (2.0 * k0));
  }
  if (telemetry) {
    telemetry->max_norm_drift = max_drift;
    telemetry->steps = medium.nz;
  }
  return out;
}

MCFEstimate estimate_mcf(const std::vector<FieldRealization>& ensemble) {
  if (ensemble.size() < 2) throw InvalidArgumentError("estimate_mcf: need >= 2 realizations");
  const Eigen::Index n = ensemble.front().gc.size();
  const double z = ensemble.front().z;
  for (const FieldRealization& f : ensemble) {
    if (f.gc.size() != n) throw DimensionError("estimate_mcf: inconsistent grids");
    if (std::abs(f.z - z) > 1e-9 * std::max(1.0, std::abs(z))) {
      throw InvalidArgumentError("estimate_mcf: realizations at different z");
    }
  }
  const std::size_t nr = ensemble.size();
  MCFEstimate out;
  out.n_realizations = static_cast<int>(nr);
  out.z = z;
  out.mcf.resize(n, n);
  out.stderr_map.resize(n, n);

  // Two-pass per entry: numerically stable variance, and exactly zero spread
  // for a degenerate (repeated) ensemble.
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      Complex sum = 0.0;
      bool all_same = true;
      const Complex first = std::conj(ensemble.front().gc[a]) * ensemble.front().gc[b];
      for (const FieldRealization& f : ensemble) {
        const Complex v = std::conj(f.gc[a]) * f.gc[b];
        sum += v;
        all_same = all_same && (v == first);
      }
      const Complex mean = all_same ? first : sum / static_cast<double>(nr);
      out.mcf(a, b) = mean;
      if (all_same) {
        out.stderr_map(a, b) = 0.0;
        continue;
      }
      double var = 0.0;
      for (const FieldRealization& f : ensemble) {
        var += std::norm(std::conj(f.gc[a]) * f.gc[b] - mean);
      }
      var /= static_cast<double>(nr - 1);
      out.stderr_map(a, b) = std::sqrt(var / static_cast<double>(nr));
    }
  }
  return out;
}

MomentComparison compare_mcf_to_moment(const MCFEstimate& mcf, const EvolutionResult& evo,
                                       double z, double perturbative_allowance_rel) {
  if (evo.states.empty()) throw InvalidArgumentError("compare_mcf_to_moment: empty evolution");
  const Eigen::Index n = mcf.mcf.rows();
  if (evo.states.front().theta_inv.rows() != n) {
    throw DimensionError("compare_mcf_to_moment: grids differ");
  }
  const ThermalState* at_z = nullptr;
  for (const ThermalState& s : evo.states) {
    if (std::abs(s.z - z) <= 1e-9 * std::max(1.0, std::abs(z))) {
      at_z = &s;
      break;
    }
  }
  if (!at_z) throw InvalidArgumentError("compare_mcf_to_moment: z sample not present");

  // MCF(a, b) = <a*(K_a) a(K_b)> = Theta^{-1}(b, a) / 2 = conj(Theta^{-1})(a, b) / 2.
  const Eigen::MatrixXcd theory_initial = 0.5 * evo.states.front().theta_inv.conjugate();
  const Eigen::MatrixXcd theory_at_z = 0.5 * at_z->theta_inv.conjugate();
  const Eigen::MatrixXcd theory_incr = theory_at_z - theory_initial;
  const Eigen::MatrixXcd mc_incr = mcf.mcf - theory_initial;

  MomentComparison cmp;
  cmp.max_theory_increment = theory_incr.cwiseAbs().maxCoeff();
  const double allowance = perturbative_allowance_rel * cmp.max_theory_increment;
  // Rounding floor: keeps z-scores finite when both pipelines are exact
  // (zero turbulence) and the only residue is split-step phase rounding.
  const double floor = 1e-12 * theory_initial.cwiseAbs().maxCoeff();
  cmp.z_scores.resize(n, n);
  long within2 = 0, beyond3 = 0;
  double chi2 = 0.0;
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const double num = std::abs(mc_incr(a, b) - theory_incr(a, b));
      const double den = mcf.stderr_map(a, b) + allowance + floor;
      const double zscore = (num == 0.0) ? 0.0 : num / den;
      cmp.z_scores(a, b) = zscore;
      if (zscore < 2.0) ++within2;
      if (zscore > 3.0) ++beyond3;
      chi2 += zscore * zscore;
    }
  }
  const double total = static_cast<double>(n) * static_cast<double>(n);
  cmp.frac_within_2 = within2 / total;
  cmp.frac_beyond_3 = beyond3 / total;
  cmp.mean_chi2 = chi2 / total;
  return cmp;
}

} // namespace turbmom
