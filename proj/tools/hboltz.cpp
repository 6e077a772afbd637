// hboltz: assemble collision tensors and run Hermite-Galerkin simulations
// of the spatially homogeneous Boltzmann equation.

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "hboltz/commands.hpp"

namespace {

using hboltz::RunConfig;

// Flags mirror the config keys; anything given on the command line wins
// over the config file, which wins over HBOLTZ_CACHE_DIR and defaults.
struct Overrides {
  std::string config_file;
  std::map<std::string, std::string> values;
  bool single_thread = false;

  void attach(CLI::App& app)
  {
    app.add_option("-c,--config", config_file, "Config file of 'key = value' lines");
    const std::pair<const char*, const char*> flags[] = {
        {"--eta", "eta"},
        {"--M", "M"},
        {"--M0", "M0"},
        {"--model", "model"},
        {"--dt", "dt"},
        {"--t-end", "t_end"},
        {"--experiment", "experiment"},
        {"--coeffs-file", "coeffs_file"},
        {"--abs-tol", "abs_tol"},
        {"--rel-tol", "rel_tol"},
        {"--max-subdivisions", "max_subdivisions"},
        {"--cache-dir", "cache_dir"},
        {"--output-dir", "output_dir"},
        {"--marginal-every", "marginal_every"},
        {"--v-max", "v_max"},
        {"--v-points", "v_points"},
        {"--v-points-2d", "v_points_2d"},
        {"--drop-floor", "drop_floor"},
        {"--memory-cap-gib", "memory_cap_gib"},
        {"--threads", "threads"},
    };
    for (const auto& [flag, key] : flags) {
      app.add_option(flag, values[key], std::string("Override config key ") + key);
    }
    app.add_flag("--single-thread", single_thread, "Run assembly on one thread (bit-reproducible output)");
  }

  RunConfig resolve() const
  {
    RunConfig cfg;
    if (const char* env = std::getenv("HBOLTZ_CACHE_DIR"); env && *env) cfg.cache_dir = env;
    if (!config_file.empty()) cfg = hboltz::load_config_file(config_file, cfg);
    for (const auto& [key, value] : values) {
      if (!value.empty()) hboltz::apply_setting(cfg, key, value);
    }
    if (single_thread) cfg.single_thread = true;
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Hermite-Galerkin solver for the homogeneous Boltzmann equation with IPL kernels"};
  app.require_subcommand(1);

  Overrides assemble_opts, run_opts, info_opts, cache_opts;
  auto* assemble = app.add_subcommand("assemble", "Assemble and cache the collision tensor for (eta, M0)");
  assemble_opts.attach(*assemble);
  auto* run = app.add_subcommand("run", "Integrate an experiment and write CSV output");
  run_opts.attach(*run);
  auto* info = app.add_subcommand("info", "Report basis sizes, memory estimate and relaxation constants");
  info_opts.attach(*info);
  auto* cache = app.add_subcommand("cache", "Inspect or clear the tensor cache");
  cache->require_subcommand(1);
  auto* cache_ls = cache->add_subcommand("ls", "List cached tensors");
  auto* cache_rm = cache->add_subcommand("rm", "Remove the cached tensor for (eta, M0)");
  bool rm_all = false;
  cache_rm->add_flag("--all", rm_all, "Remove every cached tensor");
  cache_opts.attach(*cache);
  cache_ls->fallthrough();
  cache_rm->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(hboltz::ExitCode::usage);
  }

  try {
    if (*assemble) {
      hboltz::cmd_assemble(assemble_opts.resolve(), std::cout);
    } else if (*run) {
      hboltz::cmd_run(run_opts.resolve(), std::cout);
    } else if (*info) {
      hboltz::cmd_info(info_opts.resolve(), std::cout);
    } else if (*cache_ls) {
      hboltz::cmd_cache_ls(cache_opts.resolve(), std::cout);
    } else if (*cache_rm) {
      hboltz::cmd_cache_rm(cache_opts.resolve(), rm_all, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(hboltz::exit_code_for(std::current_exception()));
  }
  return 0;
}
