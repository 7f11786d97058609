#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "turbmom/grid.hpp"
#include "turbmom/spectrum.hpp"

namespace turbmom {

/// One reproducibility artifact per run: flat sections in a key = value file.
/// Unknown keys are rejected at load. Module-level preconditions are checked
/// when the config is materialized into grid/model objects.
struct RunConfig {
  struct GridSection {
    int n_side = 4;
    double k_extent = 20.0; // rad/m
    double k0 = 1000.0;     // rad/m
  } grid;

  struct SpectrumSection {
    std::string variant = "von_karman";
    double cn2 = 0.0;         // m^(-2/3)
    double outer_scale = 1.0; // m
    double inner_scale = 0.05; // m
  } spectrum;

  struct PropagationSection {
    double z0 = 0.0;
    std::vector<double> z_samples;
    bool markovian = false;
    bool resummed = false;
  } propagation;

  struct StateSection {
    double mean_occupation = 0.0; // uniform thermal occupation of the input
  } state;

  struct MonteCarloSection {
    int n_realizations = 0;
    std::uint64_t seed = 1;
    int nz = 0;      // 0 = auto: ceil(span / dz_auto)
    double dz = 0.0; // 0 = auto: min(l0 / 4, span / 64)
    bool thin_screen = false;
    double beam_width_frac = 0.3; // input beam sigma as fraction of k_extent
    double allowance_rel = 0.05;  // perturbative allowance in z-scores
  } montecarlo;

  struct OutputSection {
    std::string directory = "out";
  } output;
};

struct LoadedConfig {
  RunConfig cfg;
  std::string hash_hex; // FNV-1a of the raw config bytes
};

LoadedConfig load_config(const std::string& path);
LoadedConfig parse_config(const std::string& text);

/// Materialize validated domain objects from the config.
TransverseGrid config_grid(const RunConfig& cfg);
SpectrumModel config_spectrum(const RunConfig& cfg);

/// Monte-Carlo step resolution: explicit dz/nz if set, otherwise
/// dz = min(l0 / 4, span / 64) over span = last z sample - z0.
void resolve_mc_steps(const RunConfig& cfg, double& dz, int& nz);

} // namespace turbmom
