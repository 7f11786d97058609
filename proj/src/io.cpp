#include "turbmom/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>

#include "turbmom/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary layouts are little-endian; big-endian hosts need byte swaps");

namespace turbmom {

namespace {

std::ofstream open_out(const std::string& path, bool binary) {
  std::ofstream f(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!f) throw Error("cannot open for writing: " + path);
  return f;
}

void write_comment_header(std::ofstream& f, const OutputStamp& stamp) {
  f << "# turbmom " << stamp.version << "\n";
  f << "# config_hash=" << stamp.config_hash << "\n";
}

template <typename T>
void put(std::ofstream& f, const T& v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& f) {
  T v{};
  f.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!f) throw Error("unexpected end of binary file");
  return v;
}

constexpr std::uint32_t kStateMagic = 0x54534D54;  // "TMST"
constexpr std::uint32_t kMediumMagic = 0x444D4D54; // "TMMD"
constexpr std::uint32_t kFieldMagic = 0x44464D54;  // "TMFD"
constexpr std::uint32_t kLayoutVersion = 1;

std::uint64_t hash_bits(const std::string& hex) {
  std::uint64_t v = 0;
  std::from_chars(hex.data(), hex.data() + hex.size(), v, 16);
  return v;
}

} // namespace

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  char buf[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = digits[h & 0xF];
    h >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_drift_kernel_csv(const std::string& path, const TransverseGrid& grid,
                            const DriftKernel& kernel, const OutputStamp& stamp) {
  std::ofstream f = open_out(path, false);
  write_comment_header(f, stamp);
  f << "kx,ky,re,im\n";
  for (int i = 0; i < grid.size(); ++i) {
    f << format_double(grid.points[static_cast<std::size_t>(i)].x()) << ','
      << format_double(grid.points[static_cast<std::size_t>(i)].y()) << ','
      << format_double(kernel.diag[i].real()) << ',' << format_double(kernel.diag[i].imag())
      << '\n';
  }
}

void write_vertex_slice_csv(const std::string& path, const VertexKernel& vk, int i3,
                            const OutputStamp& stamp) {
  const TransverseGrid& grid = vk.grid();
  std::ofstream f = open_out(path, false);
  write_comment_header(f, stamp);
  f << "# fixed K3 index " << i3 << " at kx=" << format_double(grid.points[i3].x())
    << " ky=" << format_double(grid.points[i3].y()) << "\n";
  f << "k1x,k1y,k2x,k2y,re,im\n";
  for (int i1 = 0; i1 < grid.size(); ++i1) {
    for (int i2 = 0; i2 < grid.size(); ++i2) {
      const std::complex<double> v = vk.eval(i1, i2, i3);
      f << format_double(grid.points[static_cast<std::size_t>(i1)].x()) << ','
        << format_double(grid.points[static_cast<std::size_t>(i1)].y()) << ','
        << format_double(grid.points[static_cast<std::size_t>(i2)].x()) << ','
        << format_double(grid.points[static_cast<std::size_t>(i2)].y()) << ','
        << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
    }
  }
}

void write_state_csv(const std::string& path, const ThermalState& state,
                     const OutputStamp& stamp) {
  std::ofstream f = open_out(path, false);
  write_comment_header(f, stamp);
  f << "# z=" << format_double(state.z) << "\n";
  f << "row,col,re,im\n";
  for (Eigen::Index r = 0; r < state.theta_inv.rows(); ++r) {
    for (Eigen::Index c = 0; c < state.theta_inv.cols(); ++c) {
      f << r << ',' << c << ',' << format_double(state.theta_inv(r, c).real()) << ','
        << format_double(state.theta_inv(r, c).imag()) << '\n';
    }
  }
}

void write_mcf_csv(const std::string& path, const MCFEstimate& mcf, const OutputStamp& stamp) {
  std::ofstream f = open_out(path, false);
  write_comment_header(f, stamp);
  f << "# z=" << format_double(mcf.z) << " n_realizations=" << mcf.n_realizations << "\n";
  f << "a,b,re,im,stderr\n";
  for (Eigen::Index a = 0; a < mcf.mcf.rows(); ++a) {
    for (Eigen::Index b = 0; b < mcf.mcf.cols(); ++b) {
      f << a << ',' << b << ',' << format_double(mcf.mcf(a, b).real()) << ','
        << format_double(mcf.mcf(a, b).imag()) << ',' << format_double(mcf.stderr_map(a, b))
        << '\n';
    }
  }
}

void write_evolution_csv(const std::string& path, const std::vector<double>& z_samples,
                         const EvolutionResult& result, const OutputStamp& stamp) {
  std::ofstream f = open_out(path, false);
  write_comment_header(f, stamp);
  f << "z,trace_drift,min_eigenvalue,quartic_norm,validity_exit\n";
  for (std::size_t j = 0; j < z_samples.size(); ++j) {
    f << format_double(z_samples[j]) << ','
      << format_double(result.trace_drift[static_cast<Eigen::Index>(j)]) << ','
      << format_double(result.min_eigenvalue[static_cast<Eigen::Index>(j)]) << ','
      << format_double(result.quartic_norm[static_cast<Eigen::Index>(j)]) << ','
      << static_cast<int>(result.validity_exit[j]) << '\n';
  }
}

void write_loss_csv(const std::string& path, const TransverseGrid& grid,
                    const LossDiagnostics& diag, const OutputStamp& stamp) {
  std::ofstream f = open_out(path, false);
  write_comment_header(f, stamp);
  f << "kx,ky,re,im\n";
  for (int i = 0; i < grid.size(); ++i) {
    f << format_double(grid.points[static_cast<std::size_t>(i)].x()) << ','
      << format_double(grid.points[static_cast<std::size_t>(i)].y()) << ','
      << format_double(diag.phi1_diag[i].real()) << ','
      << format_double(diag.phi1_diag[i].imag()) << '\n';
  }
  f << "# summary: mean_re=" << format_double(diag.mean_rate.real())
    << " mean_im=" << format_double(diag.mean_rate.imag())
    << " k_variation=" << format_double(diag.k_variation)
    << " markovian=" << (diag.markovian ? 1 : 0) << "\n";
}

void write_zscores_csv(const std::string& path, const MomentComparison& cmp,
                       const OutputStamp& stamp) {
  std::ofstream f = open_out(path, false);
  write_comment_header(f, stamp);
  f << "# frac_within_2=" << format_double(cmp.frac_within_2)
    << " frac_beyond_3=" << format_double(cmp.frac_beyond_3)
    << " mean_chi2=" << format_double(cmp.mean_chi2) << "\n";
  f << "a,b,zscore\n";
  for (Eigen::Index a = 0; a < cmp.z_scores.rows(); ++a) {
    for (Eigen::Index b = 0; b < cmp.z_scores.cols(); ++b) {
      f << a << ',' << b << ',' << format_double(cmp.z_scores(a, b)) << '\n';
    }
  }
}

void write_state_binary(const std::string& path, const ThermalState& state, int n_side,
                        const OutputStamp& stamp) {
  std::ofstream f = open_out(path, true);
  put(f, kStateMagic);
  put(f, kLayoutVersion);
  put(f, hash_bits(stamp.config_hash));
  put(f, static_cast<std::uint64_t>(n_side));
  put(f, state.z);
  for (Eigen::Index r = 0; r < state.theta_inv.rows(); ++r) {
    for (Eigen::Index c = 0; c < state.theta_inv.cols(); ++c) {
      put(f, state.theta_inv(r, c).real());
      put(f, state.theta_inv(r, c).imag());
    }
  }
}

ThermalState read_state_binary(const std::string& path, const TransverseGrid& grid) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for reading: " + path);
  if (get<std::uint32_t>(f) != kStateMagic) throw Error("not a state file: " + path);
  get<std::uint32_t>(f); // layout version
  get<std::uint64_t>(f); // config hash
  const auto n_side = static_cast<int>(get<std::uint64_t>(f));
  if (n_side != grid.n_side) throw DimensionError("read_state_binary: grid mismatch");
  ThermalState s;
  s.z = get<double>(f);
  s.weight = grid.weight();
  const int n = grid.size();
  s.theta_inv.resize(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const double re = get<double>(f);
      const double im = get<double>(f);
      s.theta_inv(r, c) = {re, im};
    }
  }
  return s;
}

void write_medium_binary(const std::string& path, const Medium3D& medium,
                         const OutputStamp& stamp) {
  std::ofstream f = open_out(path, true);
  put(f, kMediumMagic);
  put(f, kLayoutVersion);
  put(f, hash_bits(stamp.config_hash));
  put(f, static_cast<std::uint64_t>(medium.nx));
  put(f, static_cast<std::uint64_t>(medium.ny));
  put(f, static_cast<std::uint64_t>(medium.nz));
  put(f, medium.dx);
  put(f, medium.dy);
  put(f, medium.dz);
  put(f, medium.seed);
  for (double v : medium.values) put(f, v);
}

Medium3D read_medium_binary(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for reading: " + path);
  if (get<std::uint32_t>(f) != kMediumMagic) throw Error("not a medium file: " + path);
  get<std::uint32_t>(f);
  get<std::uint64_t>(f);
  Medium3D m;
  m.nx = static_cast<int>(get<std::uint64_t>(f));
  m.ny = static_cast<int>(get<std::uint64_t>(f));
  m.nz = static_cast<int>(get<std::uint64_t>(f));
  m.dx = get<double>(f);
  m.dy = get<double>(f);
  m.dz = get<double>(f);
  m.seed = get<std::uint64_t>(f);
  m.values.resize(static_cast<std::size_t>(m.nx) * m.ny * m.nz);
  for (double& v : m.values) v = get<double>(f);
  return m;
}

void write_field_binary(const std::string& path, const FieldRealization& field,
                        const OutputStamp& stamp) {
  std::ofstream f = open_out(path, true);
  put(f, kFieldMagic);
  put(f, kLayoutVersion);
  put(f, hash_bits(stamp.config_hash));
  put(f, static_cast<std::uint64_t>(field.gc.size()));
  put(f, field.z);
  for (Eigen::Index i = 0; i < field.gc.size(); ++i) {
    put(f, field.gc[i].real());
    put(f, field.gc[i].imag());
  }
}

} // namespace turbmom
