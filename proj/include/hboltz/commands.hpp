#pragma once

// The verbs of the hboltz tool, usable without the argument parser.

#include <exception>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "hboltz/config.hpp"
#include "hboltz/errors.hpp"
#include "hboltz/solver.hpp"

namespace hboltz {

/// Assembles and caches the tensor for (eta, M0) unless a valid cache file
/// already exists. Progress goes to `log`.
void cmd_assemble(const RunConfig& cfg, std::ostream& log);

struct RunSummary {
  int steps = 0;
  double max_rho_drift = 0.0;
  double max_u_drift = 0.0;
  double max_theta_drift = 0.0;
  double max_bkw_deviation = -1.0;  // bkw only; max |f_k - exact f_k|
  SpectralState final_state;
  std::filesystem::path trajectory_csv;
  std::vector<std::filesystem::path> marginal_files;
};

/// Runs the configured experiment and writes the trajectory CSV plus
/// marginal snapshots under cfg.output_dir. Throws CacheMissError when the
/// tensor is needed but not cached.
RunSummary cmd_run(const RunConfig& cfg, std::ostream& log);

/// N_M, N_M0, memory estimate, nu_M0 (if cached), tau_BGK and tau_s.
void cmd_info(const RunConfig& cfg, std::ostream& out);

/// Lists cache files with their header metadata.
void cmd_cache_ls(const RunConfig& cfg, std::ostream& out);

/// Removes the cache file for (eta, M0), or every cache file when `all`.
/// Returns the number of files removed.
int cmd_cache_rm(const RunConfig& cfg, bool all, std::ostream& out);

/// Initial state of the configured experiment over I_M.
SpectralState initial_state(const RunConfig& cfg);

/// Reads "k1 k2 k3 value" lines (# comments allowed) into a state over I_M.
SpectralState read_coefficients(const std::filesystem::path& path, int M);

/// Maps an exception to the process exit code.
ExitCode exit_code_for(const std::exception_ptr& error);

}  // namespace hboltz
