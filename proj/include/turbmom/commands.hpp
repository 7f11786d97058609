#pragma once

#include <string>

#include "turbmom/config.hpp"
#include "turbmom/evolve.hpp"
#include "turbmom/propagate.hpp"

namespace turbmom {

/// CLI subcommand drivers. Each writes its report files under out_dir and
/// returns the process exit code: 0 success, 2 usage/I-O, 3 invariant
/// violation.
int cmd_kernels(const LoadedConfig& config, const std::string& out_dir, int workers);
int cmd_evolve(const LoadedConfig& config, const std::string& out_dir, int workers);
int cmd_validate(const LoadedConfig& config, const std::string& out_dir, int workers);
int cmd_losscheck(const LoadedConfig& config, const std::string& out_dir, int workers);

/// The full Monte-Carlo validation pipeline behind cmd_validate: matched
/// beam, kernel evolution, medium ensemble, MCF estimate and comparison.
struct ValidationOutcome {
  EvolutionResult evo;
  MCFEstimate mcf;
  MomentComparison comparison;
  double max_norm_drift = 0.0;
  double boundary_leakage = 0.0;
  int nz = 0;
};

ValidationOutcome run_validation(const LoadedConfig& config, int workers);

} // namespace turbmom
