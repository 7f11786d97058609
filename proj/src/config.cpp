#include "turbmom/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "turbmom/errors.hpp"
#include "turbmom/io.hpp"

namespace turbmom {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InvalidArgumentError("config: bad boolean for " + key + ": " + v);
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw InvalidArgumentError("config: bad number for " + key + ": " + v);
  }
}

long parse_int(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw InvalidArgumentError("config: bad integer for " + key + ": " + v);
  }
}

std::uint64_t parse_u64(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw InvalidArgumentError("config: bad unsigned integer for " + key + ": " + v);
  }
}

std::vector<double> parse_list(const std::string& v, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_double(item, key));
  }
  if (out.empty()) throw InvalidArgumentError("config: empty list for " + key);
  return out;
}

} // namespace

LoadedConfig parse_config(const std::string& text) {
  LoadedConfig loaded;
  loaded.hash_hex = fnv1a_hex(text);
  RunConfig& cfg = loaded.cfg;

  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw InvalidArgumentError("config: malformed section at line " + std::to_string(lineno));
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgumentError("config: expected key = value at line " + std::to_string(lineno));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string full = section + "." + key;

    if (full == "grid.n_side") cfg.grid.n_side = static_cast<int>(parse_int(value, full));
    else if (full == "grid.k_extent") cfg.grid.k_extent = parse_double(value, full);
    else if (full == "grid.k0") cfg.grid.k0 = parse_double(value, full);
    else if (full == "spectrum.variant") cfg.spectrum.variant = value;
    else if (full == "spectrum.cn2") cfg.spectrum.cn2 = parse_double(value, full);
    else if (full == "spectrum.outer_scale") cfg.spectrum.outer_scale = parse_double(value, full);
    else if (full == "spectrum.inner_scale") cfg.spectrum.inner_scale = parse_double(value, full);
    else if (full == "propagation.z0") cfg.propagation.z0 = parse_double(value, full);
    else if (full == "propagation.z_samples") cfg.propagation.z_samples = parse_list(value, full);
    else if (full == "propagation.markovian") cfg.propagation.markovian = parse_bool(value, full);
    else if (full == "propagation.resummed") cfg.propagation.resummed = parse_bool(value, full);
    else if (full == "state.mean_occupation") cfg.state.mean_occupation = parse_double(value, full);
    else if (full == "montecarlo.n_realizations")
      cfg.montecarlo.n_realizations = static_cast<int>(parse_int(value, full));
    else if (full == "montecarlo.seed") cfg.montecarlo.seed = parse_u64(value, full);
    else if (full == "montecarlo.nz") cfg.montecarlo.nz = static_cast<int>(parse_int(value, full));
    else if (full == "montecarlo.dz") cfg.montecarlo.dz = parse_double(value, full);
    else if (full == "montecarlo.thin_screen")
      cfg.montecarlo.thin_screen = parse_bool(value, full);
    else if (full == "montecarlo.beam_width_frac")
      cfg.montecarlo.beam_width_frac = parse_double(value, full);
    else if (full == "montecarlo.allowance_rel")
      cfg.montecarlo.allowance_rel = parse_double(value, full);
    else if (full == "output.directory") cfg.output.directory = value;
    else throw InvalidArgumentError("config: unknown key '" + full + "'");
  }

  // Validate module preconditions up front.
  config_grid(cfg);
  config_spectrum(cfg);
  if (!cfg.propagation.z_samples.empty()) {
    double prev = cfg.propagation.z0;
    for (double z : cfg.propagation.z_samples) {
      if (!(z > prev)) {
        throw InvalidArgumentError("config: z_samples must be strictly increasing beyond z0");
      }
      prev = z;
    }
  }
  if (cfg.state.mean_occupation < 0.0) {
    throw InvalidArgumentError("config: mean_occupation must be >= 0");
  }
  if (cfg.montecarlo.n_realizations < 0) {
    throw InvalidArgumentError("config: n_realizations must be >= 0");
  }
  if (!(cfg.montecarlo.beam_width_frac > 0.0)) {
    throw InvalidArgumentError("config: beam_width_frac must be positive");
  }
  if (cfg.montecarlo.allowance_rel < 0.0) {
    throw InvalidArgumentError("config: allowance_rel must be >= 0");
  }
  return loaded;
}

LoadedConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open config: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

TransverseGrid config_grid(const RunConfig& cfg) {
  return build_grid(cfg.grid.n_side, cfg.grid.k_extent, cfg.grid.k0);
}

SpectrumModel config_spectrum(const RunConfig& cfg) {
  const std::string& v = cfg.spectrum.variant;
  if (v == "kolmogorov") return kolmogorov(cfg.spectrum.cn2);
  if (v == "von_karman")
    return von_karman(cfg.spectrum.cn2, cfg.spectrum.outer_scale, cfg.spectrum.inner_scale);
  if (v == "tatarskii") return tatarskii(cfg.spectrum.cn2, cfg.spectrum.inner_scale);
  throw InvalidArgumentError("config: unknown spectrum variant '" + v + "'");
}

void resolve_mc_steps(const RunConfig& cfg, double& dz, int& nz) {
  if (cfg.propagation.z_samples.empty()) {
    throw InvalidArgumentError("resolve_mc_steps: no z samples configured");
  }
  const double span = cfg.propagation.z_samples.back() - cfg.propagation.z0;
  if (cfg.montecarlo.dz > 0.0) {
    dz = cfg.montecarlo.dz;
  } else {
    dz = std::min(cfg.spectrum.inner_scale / 4.0, span / 64.0);
  }
  if (cfg.montecarlo.nz > 0) {
    nz = cfg.montecarlo.nz;
    dz = span / nz;
  } else {
    nz = std::max(4, static_cast<int>(std::ceil(span / dz)));
    dz = span / nz;
  }
}

} // namespace turbmom
