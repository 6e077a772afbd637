#include "hboltz/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "hboltz/collision_tensor.hpp"
#include "hboltz/errors.hpp"

namespace hboltz {

namespace {

std::string_view trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value)
{
  throw ConfigError("invalid value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

double parse_double(std::string_view key, std::string_view value)
{
  double out = 0.0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) bad_value(key, value);
  return out;
}

int parse_int(std::string_view key, std::string_view value)
{
  int out = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) bad_value(key, value);
  return out;
}

bool parse_bool(std::string_view key, std::string_view value)
{
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value);
}

}  // namespace

std::string to_string(ModelKind m)
{
  switch (m) {
    case ModelKind::quadratic: return "quadratic";
    case ModelKind::hybrid: return "hybrid";
    case ModelKind::bgk: return "bgk";
  }
  return "?";
}

std::string to_string(Experiment e)
{
  switch (e) {
    case Experiment::bkw: return "bkw";
    case Experiment::bigaussian: return "bigaussian";
    case Experiment::discontinuous: return "discontinuous";
    case Experiment::custom: return "custom";
  }
  return "?";
}

void RunConfig::validate_kernel() const
{
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (!(eta > 3.0)) fail("eta must exceed 3");
  if (M0 < 2) fail("M0 must be at least 2");
  quad.validate();
  if (!(drop_floor >= 0.0)) fail("drop_floor must be nonnegative");
  if (!(memory_cap_gib > 0.0)) fail("memory_cap_gib must be positive");
  if (threads < 0) fail("threads must be nonnegative");
}

void RunConfig::validate() const
{
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  validate_kernel();
  if (M < 0) fail("M must be nonnegative");
  if (M0 > M) fail("M0 must not exceed M");
  if (model == ModelKind::quadratic && M != M0) fail("the quadratic model needs M == M0; use the hybrid model for M > M0");
  if (!(dt > 0.0)) fail("dt must be positive");
  if (!(t_end >= 0.0)) fail("t_end must be nonnegative");
  if (experiment == Experiment::custom && coeffs_file.empty()) fail("experiment = custom needs coeffs_file");
  if (experiment == Experiment::bkw && eta != 5.0) fail("the BKW experiment needs eta = 5");
  if (marginal_every < 0) fail("marginal_every must be nonnegative");
  if (!(v_max > 0.0) || v_points < 2 || v_points_2d < 2) fail("marginal grid needs v_max > 0 and at least 2 points");
}

std::uint64_t RunConfig::memory_cap_bytes() const
{
  return static_cast<std::uint64_t>(memory_cap_gib * static_cast<double>(std::uint64_t{1} << 30));
}

bool operator==(const RunConfig& a, const RunConfig& b) { return serialize_config(a) == serialize_config(b); }

const std::vector<std::string>& config_keys()
{
  static const std::vector<std::string> keys{
      "eta",          "M",           "M0",       "model",      "dt",          "t_end",
      "experiment",   "coeffs_file", "abs_tol",  "rel_tol",    "max_subdivisions",
      "cache_dir",    "output_dir",  "marginal_every", "v_max", "v_points",   "v_points_2d",
      "drop_floor",   "memory_cap_gib", "threads", "single_thread"};
  return keys;
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view raw)
{
  const std::string_view v = trim(raw);
  if (key == "eta") c.eta = parse_double(key, v);
  else if (key == "M") c.M = parse_int(key, v);
  else if (key == "M0") c.M0 = parse_int(key, v);
  else if (key == "model") {
    if (v == "quadratic") c.model = ModelKind::quadratic;
    else if (v == "hybrid") c.model = ModelKind::hybrid;
    else if (v == "bgk") c.model = ModelKind::bgk;
    else bad_value(key, v);
  }
  else if (key == "dt") c.dt = parse_double(key, v);
  else if (key == "t_end") c.t_end = parse_double(key, v);
  else if (key == "experiment") {
    if (v == "bkw") c.experiment = Experiment::bkw;
    else if (v == "bigaussian") c.experiment = Experiment::bigaussian;
    else if (v == "discontinuous") c.experiment = Experiment::discontinuous;
    else if (v == "custom") c.experiment = Experiment::custom;
    else bad_value(key, v);
  }
  else if (key == "coeffs_file") c.coeffs_file = std::string(v);
  else if (key == "abs_tol") c.quad.abs_tol = parse_double(key, v);
  else if (key == "rel_tol") c.quad.rel_tol = parse_double(key, v);
  else if (key == "max_subdivisions") c.quad.max_subdivisions = parse_int(key, v);
  else if (key == "cache_dir") c.cache_dir = std::string(v);
  else if (key == "output_dir") c.output_dir = std::string(v);
  else if (key == "marginal_every") c.marginal_every = parse_int(key, v);
  else if (key == "v_max") c.v_max = parse_double(key, v);
  else if (key == "v_points") c.v_points = parse_int(key, v);
  else if (key == "v_points_2d") c.v_points_2d = parse_int(key, v);
  else if (key == "drop_floor") c.drop_floor = parse_double(key, v);
  else if (key == "memory_cap_gib") c.memory_cap_gib = parse_double(key, v);
  else if (key == "threads") c.threads = parse_int(key, v);
  else if (key == "single_thread") c.single_thread = parse_bool(key, v);
  else throw ConfigError("unknown configuration key '" + std::string(key) + "'");
}

RunConfig parse_config(std::string_view text, RunConfig cfg)
{
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    apply_setting(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path, RunConfig base)
{
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string serialize_config(const RunConfig& c)
{
  std::ostringstream out;
  out << "eta = " << format_real(c.eta) << '\n'
      << "M = " << c.M << '\n'
      << "M0 = " << c.M0 << '\n'
      << "model = " << to_string(c.model) << '\n'
      << "dt = " << format_real(c.dt) << '\n'
      << "t_end = " << format_real(c.t_end) << '\n'
      << "experiment = " << to_string(c.experiment) << '\n'
      << "coeffs_file = " << c.coeffs_file << '\n'
      << "abs_tol = " << format_real(c.quad.abs_tol) << '\n'
      << "rel_tol = " << format_real(c.quad.rel_tol) << '\n'
      << "max_subdivisions = " << c.quad.max_subdivisions << '\n'
      << "cache_dir = " << c.cache_dir << '\n'
      << "output_dir = " << c.output_dir << '\n'
      << "marginal_every = " << c.marginal_every << '\n'
      << "v_max = " << format_real(c.v_max) << '\n'
      << "v_points = " << c.v_points << '\n'
      << "v_points_2d = " << c.v_points_2d << '\n'
      << "drop_floor = " << format_real(c.drop_floor) << '\n'
      << "memory_cap_gib = " << format_real(c.memory_cap_gib) << '\n'
      << "threads = " << c.threads << '\n'
      << "single_thread = " << (c.single_thread ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace hboltz
