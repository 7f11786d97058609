#include "turbmom/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <vector>

#include "turbmom/errors.hpp"
#include "turbmom/evolve.hpp"
#include "turbmom/io.hpp"
#include "turbmom/kernels.hpp"
#include "turbmom/lossmodel.hpp"
#include "turbmom/medium.hpp"
#include "turbmom/parallel.hpp"
#include "turbmom/propagate.hpp"
#include "turbmom/rng.hpp"
#include "turbmom/states.hpp"
#include "turbmom/version.hpp"

namespace turbmom {

namespace {

constexpr double kResidualTolerance = 1e-8;
constexpr double kTraceTolerance = 1e-8;

OutputStamp make_stamp(const LoadedConfig& config) {
  return OutputStamp{kVersion, config.hash_hex};
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory: " + dir);
}

double config_z_end(const RunConfig& cfg) {
  if (cfg.propagation.z_samples.empty()) {
    throw InvalidArgumentError("config: propagation.z_samples is required");
  }
  return cfg.propagation.z_samples.back();
}

std::vector<double> samples_with_origin(const RunConfig& cfg) {
  std::vector<double> z{cfg.propagation.z0};
  z.insert(z.end(), cfg.propagation.z_samples.begin(), cfg.propagation.z_samples.end());
  return z;
}

int central_index(const TransverseGrid& grid) {
  int best = 0;
  for (int i = 1; i < grid.size(); ++i) {
    if (grid.norm2_int(i) < grid.norm2_int(best)) best = i;
  }
  return best;
}

/// Normalized Gaussian input beam spectrum, sigma = frac * k_extent.
Eigen::VectorXcd beam_spectrum(const TransverseGrid& grid, double width_frac) {
  const double k_extent = 0.5 * grid.n_side * grid.delta_k;
  const double sigma = width_frac * k_extent;
  Eigen::VectorXcd g(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    g[i] = std::exp(-grid.norm2(i) / (2.0 * sigma * sigma));
  }
  const double norm = std::sqrt(grid.weight()) * g.norm();
  g /= norm;
  return g;
}

} // namespace

int cmd_kernels(const LoadedConfig& config, const std::string& out_dir, int workers) {
  const RunConfig& cfg = config.cfg;
  ensure_dir(out_dir);
  const OutputStamp stamp = make_stamp(config);
  const TransverseGrid grid = config_grid(cfg);
  const SpectrumModel model = config_spectrum(cfg);
  const double z0 = cfg.propagation.z0;
  const double z = config_z_end(cfg);

  KernelQuadrature quad;
  quad.workers = workers;

  const DriftKernel phi1 = phi1_compute(grid, model, z, z0, quad);
  write_drift_kernel_csv(join(out_dir, "phi1.csv"), grid, phi1, stamp);
  if (cfg.propagation.markovian) {
    write_drift_kernel_csv(join(out_dir, "phi1_markovian.csv"), grid, phi1_markovian(grid, model),
                           stamp);
  }

  const VertexKernel vk(grid, model, z, z0, quad);
  const int i3 = central_index(grid);
  write_vertex_slice_csv(join(out_dir, "phi0_slice_" + std::to_string(i3) + ".csv"), vk, i3,
                         stamp);

  const double residual = contraction_residual(vk, phi1);
  {
    std::ofstream f(join(out_dir, "residual_summary.csv"), std::ios::trunc);
    if (!f) throw Error("cannot write residual summary");
    f << "# turbmom " << stamp.version << "\n# config_hash=" << stamp.config_hash << "\n";
    f << "residual,tolerance,pass\n";
    f << format_double(residual) << ',' << format_double(kResidualTolerance) << ','
      << (residual < kResidualTolerance ? 1 : 0) << '\n';
  }
  return residual < kResidualTolerance ? 0 : 3;
}

int cmd_evolve(const LoadedConfig& config, const std::string& out_dir, int workers) {
  const RunConfig& cfg = config.cfg;
  ensure_dir(out_dir);
  const OutputStamp stamp = make_stamp(config);
  const TransverseGrid grid = config_grid(cfg);
  const SpectrumModel model = config_spectrum(cfg);
  const std::vector<double> z = samples_with_origin(cfg);

  const Eigen::VectorXd occ =
      Eigen::VectorXd::Constant(grid.size(), cfg.state.mean_occupation);
  const ThermalState initial = thermal_from_modes(grid, occ, cfg.propagation.z0);

  EvolveOptions opts;
  opts.quad.workers = workers;

  int exit_code = 0;
  auto run_one = [&](bool resummed, const std::string& tag) {
    EvolveOptions o = opts;
    o.resummed = resummed;
    const EvolutionResult res = evolve_thermal(initial, grid, model, z, o);
    write_evolution_csv(join(out_dir, "evolution" + tag + ".csv"), z, res, stamp);
    for (std::size_t j = 0; j < res.states.size(); ++j) {
      write_state_binary(join(out_dir, "state" + tag + "_" + std::to_string(j) + ".bin"),
                         res.states[j], grid.n_side, stamp);
    }
    for (Eigen::Index j = 0; j < res.trace_drift.size(); ++j) {
      if (res.trace_drift[j] > kTraceTolerance) exit_code = 3;
    }
  };

  run_one(false, "");
  if (cfg.propagation.resummed) run_one(true, "_resummed");
  return exit_code;
}

ValidationOutcome run_validation(const LoadedConfig& config, int workers) {
  const RunConfig& cfg = config.cfg;
  if (cfg.montecarlo.n_realizations < 2) {
    throw InvalidArgumentError("run_validation: montecarlo.n_realizations must be >= 2");
  }
  const TransverseGrid grid = config_grid(cfg);
  const SpectrumModel model = config_spectrum(cfg);
  const double z0 = cfg.propagation.z0;
  const double z_end = config_z_end(cfg);

  // Matched initial conditions: deterministic beam G0, Theta^{-1} = 2 G0 G0^dag.
  const Eigen::VectorXcd g0 = beam_spectrum(grid, cfg.montecarlo.beam_width_frac);
  const Eigen::MatrixXcd theta0 = 2.0 * (g0 * g0.adjoint());
  const ThermalState initial = make_thermal_state(grid, theta0, z0);

  EvolveOptions opts;
  opts.with_quartic = false;
  opts.quad.workers = workers;
  const std::vector<double> z = samples_with_origin(cfg);

  ValidationOutcome out;
  out.evo = evolve_thermal(initial, grid, model, z, opts);

  double dz = 0.0;
  resolve_mc_steps(cfg, dz, out.nz);
  const MediumDims dims{grid.n_side, grid.n_side, out.nz};
  const double dx = 2.0 * std::numbers::pi / (grid.n_side * grid.delta_k);
  const MediumSpacings spacings{dx, dx, dz};

  const int nreal = cfg.montecarlo.n_realizations;
  std::vector<FieldRealization> ensemble(static_cast<std::size_t>(nreal));
  std::vector<double> drifts(static_cast<std::size_t>(nreal), 0.0);
  parallel_for(static_cast<std::size_t>(nreal), workers, [&](std::size_t r) {
    const Medium3D medium =
        sample_medium(model, dims, spacings, mix_seed(cfg.montecarlo.seed, r),
                      cfg.montecarlo.thin_screen);
    FieldRealization in;
    in.gc = g0;
    in.z = z0;
    PropagationTelemetry tel;
    ensemble[r] = propagate_classical(in, medium, grid, &tel);
    drifts[r] = tel.max_norm_drift;
  });
  out.max_norm_drift = drifts.empty() ? 0.0 : *std::max_element(drifts.begin(), drifts.end());

  out.mcf = estimate_mcf(ensemble);
  out.comparison = compare_mcf_to_moment(out.mcf, out.evo, z_end, cfg.montecarlo.allowance_rel);

  // Boundary-ring leakage: share of the diagonal MCF increment sitting on the
  // outermost modes (periodic wrap-around indicator).
  double ring = 0.0, total = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    const auto& u = grid.ipoints[static_cast<std::size_t>(i)];
    const double incr = std::abs(out.mcf.mcf(i, i).real() - std::norm(g0[i]));
    total += incr;
    if (std::max(std::abs(u.x()), std::abs(u.y())) == grid.n_side - 1) ring += incr;
  }
  out.boundary_leakage = total > 0.0 ? ring / total : 0.0;
  return out;
}

int cmd_validate(const LoadedConfig& config, const std::string& out_dir, int workers) {
  const RunConfig& cfg = config.cfg;
  ensure_dir(out_dir);
  const OutputStamp stamp = make_stamp(config);
  const ValidationOutcome res = run_validation(config, workers);

  write_mcf_csv(join(out_dir, "mcf.csv"), res.mcf, stamp);
  write_zscores_csv(join(out_dir, "zscores.csv"), res.comparison, stamp);
  {
    std::ofstream f(join(out_dir, "validate_summary.csv"), std::ios::trunc);
    if (!f) throw Error("cannot write validate summary");
    f << "# turbmom " << stamp.version << "\n# config_hash=" << stamp.config_hash << "\n";
    f << "n_realizations,steps,max_norm_drift,frac_within_2,frac_beyond_3,mean_chi2,boundary_leakage\n";
    f << cfg.montecarlo.n_realizations << ',' << res.nz << ','
      << format_double(res.max_norm_drift) << ',' << format_double(res.comparison.frac_within_2)
      << ',' << format_double(res.comparison.frac_beyond_3) << ','
      << format_double(res.comparison.mean_chi2) << ',' << format_double(res.boundary_leakage)
      << '\n';
  }
  return res.comparison.frac_beyond_3 > 0.05 ? 3 : 0;
}

int cmd_losscheck(const LoadedConfig& config, const std::string& out_dir, int workers) {
  const RunConfig& cfg = config.cfg;
  ensure_dir(out_dir);
  const OutputStamp stamp = make_stamp(config);
  const TransverseGrid grid = config_grid(cfg);
  const SpectrumModel model = config_spectrum(cfg);
  const double z0 = cfg.propagation.z0;
  const double z = config_z_end(cfg);

  KernelQuadrature quad;
  quad.workers = workers;

  const LossDiagnostics nonmark = first_moment_equation(grid, model, z, z0, false, quad);
  const LossDiagnostics mark = first_moment_equation(grid, model, z, z0, true, quad);
  write_loss_csv(join(out_dir, "losscheck_nonmarkovian.csv"), grid, nonmark, stamp);
  write_loss_csv(join(out_dir, "losscheck_markovian.csv"), grid, mark, stamp);

  std::cout << "losscheck: k_variation nonmarkovian=" << format_double(nonmark.k_variation)
            << " markovian=" << format_double(mark.k_variation) << "\n";
  return 0;
}

} // namespace turbmom
