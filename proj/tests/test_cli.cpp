#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const char* kCli = TURBMOM_CLI_PATH;
const char* kConfigDir = TURBMOM_CONFIG_DIR;

int run(const std::string& args) {
  const std::string cmd = std::string(kCli) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "turbmom_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::trunc);
  f << text;
}

// Quick zero-turbulence validation config: exercised end to end in seconds.
std::string quiet_validate_config() {
  return R"([grid]
n_side = 4
k_extent = 4.0
k0 = 150.0
[spectrum]
variant = von_karman
cn2 = 0.0
outer_scale = 0.5
inner_scale = 0.08
[propagation]
z0 = 0.0
z_samples = 0.4
[montecarlo]
n_realizations = 4
seed = 11
nz = 8
)";
}

} // namespace

TEST_CASE("cli kernels subcommand produces reports and exit 0") {
  const fs::path out = fresh_dir("kernels");
  const std::string cfg = std::string(kConfigDir) + "/demo.ini";
  CHECK(run("kernels --config " + cfg + " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "phi1.csv"));
  CHECK(fs::exists(out / "residual_summary.csv"));
  bool found_slice = false;
  for (const auto& e : fs::directory_iterator(out)) {
    if (e.path().filename().string().rfind("phi0_slice_", 0) == 0) found_slice = true;
  }
  CHECK(found_slice);
}

TEST_CASE("cli evolve is deterministic byte for byte") {
  const fs::path out1 = fresh_dir("evolve1");
  const fs::path out2 = fresh_dir("evolve2");
  const std::string cfg = std::string(kConfigDir) + "/demo.ini";
  REQUIRE(run("evolve --config " + cfg + " --out " + out1.string()) == 0);
  REQUIRE(run("evolve --config " + cfg + " --out " + out2.string()) == 0);

  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(out1)) names.push_back(e.path().filename().string());
  CHECK(!names.empty());
  for (const std::string& n : names) {
    CHECK(fs::exists(out2 / n));
    CHECK(slurp(out1 / n) == slurp(out2 / n));
  }
  CHECK(fs::exists(out1 / "evolution.csv"));
  CHECK(fs::exists(out1 / "state_0.bin"));
}

TEST_CASE("cli validate on zero turbulence exits clean with zero z-scores") {
  const fs::path out = fresh_dir("validate");
  const fs::path cfg = out / "quiet.ini";
  write_file(cfg, quiet_validate_config());
  CHECK(run("validate --config " + cfg.string() + " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "mcf.csv"));
  CHECK(fs::exists(out / "zscores.csv"));
  CHECK(fs::exists(out / "validate_summary.csv"));

  const std::string summary = slurp(out / "validate_summary.csv");
  CHECK(summary.find("frac_within_2") != std::string::npos);
}

TEST_CASE("cli validate respects the seed override deterministically") {
  const fs::path out1 = fresh_dir("validate_seed1");
  const fs::path out2 = fresh_dir("validate_seed2");
  const fs::path out3 = fresh_dir("validate_seed3");
  const std::string cfg = std::string(kConfigDir) + "/demo.ini";
  REQUIRE(run("validate --config " + cfg + " --seed 5 --out " + out1.string()) == 0);
  REQUIRE(run("validate --config " + cfg + " --seed 5 --out " + out2.string()) == 0);
  REQUIRE(run("validate --config " + cfg + " --seed 6 --out " + out3.string()) == 0);
  CHECK(slurp(out1 / "mcf.csv") == slurp(out2 / "mcf.csv"));
  CHECK(slurp(out1 / "mcf.csv") != slurp(out3 / "mcf.csv"));
}

TEST_CASE("cli losscheck always exits zero and reports both modes") {
  const fs::path out = fresh_dir("losscheck");
  const std::string cfg = std::string(kConfigDir) + "/demo.ini";
  CHECK(run("losscheck --config " + cfg + " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "losscheck_markovian.csv"));
  CHECK(fs::exists(out / "losscheck_nonmarkovian.csv"));
  const std::string mark = slurp(out / "losscheck_markovian.csv");
  CHECK(mark.find("k_variation=0 ") != std::string::npos);
}

TEST_CASE("cli kernels with zero turbulence writes zero kernels and exits 0") {
  const fs::path out = fresh_dir("kernels_zero");
  const fs::path cfg = out / "zero.ini";
  write_file(cfg, R"([grid]
n_side = 2
k_extent = 3.0
k0 = 200.0
[spectrum]
variant = von_karman
cn2 = 0.0
outer_scale = 1.0
inner_scale = 0.05
[propagation]
z_samples = 0.5
)");
  CHECK(run("kernels --config " + cfg.string() + " --out " + out.string()) == 0);
  const std::string phi1 = slurp(out / "phi1.csv");
  CHECK(phi1.find(",0,0\n") != std::string::npos); // zero re/im columns
  const std::string summary = slurp(out / "residual_summary.csv");
  CHECK(summary.find("\n0,") != std::string::npos); // residual exactly 0
}

TEST_CASE("cli evolve emits both modes when the resummed flag is set") {
  const fs::path out = fresh_dir("evolve_resummed");
  const fs::path cfg = out / "resummed.ini";
  write_file(cfg, R"([grid]
n_side = 2
k_extent = 3.0
k0 = 200.0
[spectrum]
variant = von_karman
cn2 = 1e-3
outer_scale = 1.0
inner_scale = 0.05
[propagation]
z_samples = 0.3, 0.6
resummed = true
[state]
mean_occupation = 0.2
)");
  CHECK(run("evolve --config " + cfg.string() + " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "evolution.csv"));
  CHECK(fs::exists(out / "evolution_resummed.csv"));
  CHECK(fs::exists(out / "state_resummed_0.bin"));
}

TEST_CASE("OUTPUT_DIR overrides the config directory but not --out") {
  const fs::path base = fresh_dir("outputdir_env");
  const fs::path env_dir = base / "from_env";
  const std::string cfg = std::string(kConfigDir) + "/demo.ini";
  const std::string cmd = "OUTPUT_DIR=" + env_dir.string() + " " + std::string(kCli) +
                          " losscheck --config " + cfg + " > /dev/null 2>&1";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  CHECK(fs::exists(env_dir / "losscheck_markovian.csv"));
}

TEST_CASE("cli error paths use exit code 2") {
  CHECK(run("kernels --config /nonexistent.ini") == 2);
  CHECK(run("") == 2);
  CHECK(run("unknown-subcommand") == 2);

  const fs::path dir = fresh_dir("badconfig");
  const fs::path bad = dir / "bad.ini";
  write_file(bad, "[grid]\nmystery = 3\n");
  CHECK(run("kernels --config " + bad.string()) == 2);

  // Output path blocked by a regular file.
  const fs::path blocker = dir / "blocker";
  write_file(blocker, "not a directory");
  const std::string cfg = std::string(kConfigDir) + "/demo.ini";
  CHECK(run("kernels --config " + cfg + " --out " + (blocker / "sub").string()) == 2);
}
