#pragma once

// Run configuration: flat `key = value` text with `#` comments.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hboltz/quadrature.hpp"

namespace hboltz {

enum class ModelKind { quadratic, hybrid, bgk };
enum class Experiment { bkw, bigaussian, discontinuous, custom };

std::string to_string(ModelKind m);
std::string to_string(Experiment e);

struct RunConfig {
  double eta = 5.0;
  int M = 10;
  int M0 = 5;
  ModelKind model = ModelKind::hybrid;
  double dt = 0.01;
  double t_end = 1.0;
  Experiment experiment = Experiment::bkw;
  std::string coeffs_file;  // experiment = custom: lines "k1 k2 k3 value"
  QuadratureSpec quad;
  std::string cache_dir = "cache";
  std::string output_dir = "out";
  int marginal_every = 10;  // steps between marginal snapshots; 0 disables
  double v_max = 6.0;       // marginal grids cover [-v_max, v_max]
  int v_points = 121;
  int v_points_2d = 41;
  double drop_floor = 1e-14;
  double memory_cap_gib = 16.0;
  int threads = 0;
  bool single_thread = false;

  /// Throws ConfigError on any violated invariant.
  void validate() const;

  /// The subset that matters for assembling a tensor and reporting on it:
  /// eta, M0, quadrature, drop floor, memory cap, threads.
  void validate_kernel() const;

  /// Worker threads for assembly: 1 when single_thread is set.
  int effective_threads() const { return single_thread ? 1 : threads; }
  std::uint64_t memory_cap_bytes() const;

  friend bool operator==(const RunConfig&, const RunConfig&);
};

/// Known keys in serialization order.
const std::vector<std::string>& config_keys();

/// Sets one field from its textual value. Throws ConfigError for unknown
/// keys or unparsable values.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Parses `key = value` lines onto `base`. Does not validate.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config_file(const std::string& path, RunConfig base = {});

/// Every field, one per line, in a form parse_config reads back exactly.
std::string serialize_config(const RunConfig& cfg);

}  // namespace hboltz
