#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "turbmom/evolve.hpp"
#include "turbmom/grid.hpp"
#include "turbmom/kernels.hpp"
#include "turbmom/lossmodel.hpp"
#include "turbmom/medium.hpp"
#include "turbmom/propagate.hpp"
#include "turbmom/states.hpp"

namespace turbmom {

/// Reproducibility stamp embedded in every output file.
struct OutputStamp {
  std::string version;
  std::string config_hash;
};

/// FNV-1a 64-bit hash, hex-encoded; used to fingerprint config files.
std::string fnv1a_hex(const std::string& bytes);

/// Locale-independent float formatting with 17 significant digits, '.' decimal.
std::string format_double(double v);

// CSV layouts (',' separator, leading '#' comment header with version + hash).
void write_drift_kernel_csv(const std::string& path, const TransverseGrid& grid,
                            const DriftKernel& kernel, const OutputStamp& stamp);
void write_vertex_slice_csv(const std::string& path, const VertexKernel& vk, int i3,
                            const OutputStamp& stamp);
void write_state_csv(const std::string& path, const ThermalState& state, const OutputStamp& stamp);
void write_mcf_csv(const std::string& path, const MCFEstimate& mcf, const OutputStamp& stamp);
void write_evolution_csv(const std::string& path, const std::vector<double>& z_samples,
                         const EvolutionResult& result, const OutputStamp& stamp);
void write_loss_csv(const std::string& path, const TransverseGrid& grid,
                    const LossDiagnostics& diag, const OutputStamp& stamp);
void write_zscores_csv(const std::string& path, const MomentComparison& cmp,
                       const OutputStamp& stamp);

// Compact binary layouts: little-endian 64-bit floats, row-major, fixed
// headers carrying the geometry plus the stamp hash.
void write_state_binary(const std::string& path, const ThermalState& state, int n_side,
                        const OutputStamp& stamp);
ThermalState read_state_binary(const std::string& path, const TransverseGrid& grid);

void write_medium_binary(const std::string& path, const Medium3D& medium,
                         const OutputStamp& stamp);
Medium3D read_medium_binary(const std::string& path);

void write_field_binary(const std::string& path, const FieldRealization& field,
                        const OutputStamp& stamp);

} // namespace turbmom
