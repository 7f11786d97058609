#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

#include "turbmom/commands.hpp"
#include "turbmom/errors.hpp"
#include "turbmom/version.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  int workers = 1;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "run configuration file")->required();
  cmd->add_option("--out", args.out_dir, "output directory (overrides config/OUTPUT_DIR)");
  cmd->add_option("--workers", args.workers, "worker thread count")->default_val(1);
  cmd->add_option("--seed", args.seed, "override the Monte-Carlo seed")
      ->each([&args](const std::string&) { args.seed_set = true; });
}

std::string resolve_out_dir(const CommonArgs& args, const turbmom::LoadedConfig& config) {
  if (!args.out_dir.empty()) return args.out_dir;
  if (const char* env = std::getenv("OUTPUT_DIR"); env && *env) return env;
  return config.cfg.output.directory;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"turbulence vertex kernels, thermal-moment evolution and Monte-Carlo validation"};
  app.set_version_flag("--version", std::string("turbmom ") + turbmom::kVersion);
  app.require_subcommand(1);

  CommonArgs args;
  auto* kernels = app.add_subcommand("kernels", "build drift and vertex kernels, check contraction");
  auto* evolve = app.add_subcommand("evolve", "integrate the thermal second-moment evolution");
  auto* validate = app.add_subcommand("validate", "Monte-Carlo classical-propagation comparison");
  auto* losscheck = app.add_subcommand("losscheck", "loss-model first-moment diagnostics");
  for (auto* cmd : {kernels, evolve, validate, losscheck}) add_common(cmd, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    turbmom::LoadedConfig config = turbmom::load_config(args.config_path);
    if (args.seed_set) config.cfg.montecarlo.seed = args.seed;
    const std::string out_dir = resolve_out_dir(args, config);
    const int workers = std::max(1, args.workers);

    if (kernels->parsed()) return turbmom::cmd_kernels(config, out_dir, workers);
    if (evolve->parsed()) return turbmom::cmd_evolve(config, out_dir, workers);
    if (validate->parsed()) return turbmom::cmd_validate(config, out_dir, workers);
    if (losscheck->parsed()) return turbmom::cmd_losscheck(config, out_dir, workers);
    return 2;
  } catch (const turbmom::IntegrityError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const turbmom::ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return 3;
  } catch (const turbmom::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
