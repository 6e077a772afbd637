#include "hboltz/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "hboltz/collision_models.hpp"
#include "hboltz/collision_tensor.hpp"
#include "hboltz/ipl_kernel.hpp"

namespace hboltz {

namespace {

constexpr double kGiB = 1024.0 * 1024.0 * 1024.0;

std::filesystem::path tensor_file(const RunConfig& cfg) { return cache_path(cfg.cache_dir, cfg.eta, cfg.M0); }

CollisionTensor load_cached(const RunConfig& cfg)
{
  const auto path = tensor_file(cfg);
  if (!std::filesystem::exists(path)) {
    throw CacheMissError("no cached tensor at " + path.string() + "; run `hboltz assemble --eta " +
                         format_real(cfg.eta) + " --M0 " + std::to_string(cfg.M0) + "` first");
  }
  return load(path, cfg.eta, cfg.M0);
}

std::vector<double> grid(double v_max, int n)
{
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = -v_max + 2.0 * v_max * i / (n - 1);
  return v;
}

std::string fixed(double x, int digits)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::ofstream open_output(const std::filesystem::path& path)
{
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

}  // namespace

void cmd_assemble(const RunConfig& cfg, std::ostream& log)
{
  cfg.validate_kernel();
  const auto path = tensor_file(cfg);
  const std::uint64_t estimate = memory_estimate(cfg.M0);
  if (std::filesystem::exists(path)) {
    try {
      const CollisionTensor t = load(path, cfg.eta, cfg.M0);
      log << "cache hit: " << path.string() << " (" << t.size() << " entries)\n";
      return;
    } catch (const CacheFormatError& e) {
      log << "cache file unreadable (" << e.what() << "); reassembling\n";
    }
  }
  const KernelModel model(cfg.eta, cfg.quad);
  AssemblyOptions options;
  options.drop_floor = cfg.drop_floor;
  options.memory_cap_bytes = cfg.memory_cap_bytes();
  options.threads = cfg.effective_threads();
  const auto start = std::chrono::steady_clock::now();
  const CollisionTensor tensor = assemble(cfg.M0, model, options);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  save(tensor, path);
  log << "assembled eta=" << format_real(cfg.eta) << " M0=" << cfg.M0 << ": " << tensor.size() << " entries in "
      << fixed(seconds, 2) << " s\n"
      << "dense estimate " << fixed(static_cast<double>(estimate) / kGiB, 4) << " GiB (N_M0 = " << basis_size(cfg.M0)
      << ")\n"
      << "wrote " << path.string() << '\n';
}

SpectralState read_coefficients(const std::filesystem::path& path, int M)
{
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read coefficient file " + path.string());
  SpectralState s(M);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    int a = 0, b = 0, c = 0;
    double v = 0.0;
    if (!(ls >> a)) continue;
    if (!(ls >> b >> c >> v) || a < 0 || b < 0 || c < 0) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected 'k1 k2 k3 value'");
    }
    if (a + b + c > M) continue;
    s.at({a, b, c}) = v;
  }
  return s;
}

SpectralState initial_state(const RunConfig& cfg)
{
  switch (cfg.experiment) {
    case Experiment::bkw: return bkw_coeffs(0.0, BkwReference::from_kernel(KernelModel(5.0, cfg.quad)), cfg.M);
    case Experiment::bigaussian: return project_bigaussian(cfg.M);
    case Experiment::discontinuous: return project_discontinuous(cfg.M, cfg.quad);
    case Experiment::custom: return read_coefficients(cfg.coeffs_file, cfg.M);
  }
  throw ConfigError("unknown experiment");
}

RunSummary cmd_run(const RunConfig& cfg, std::ostream& log)
{
  cfg.validate();
  const KernelModel kernel(cfg.eta, cfg.quad);

  RhsFunction rhs;
  std::shared_ptr<const CollisionTensor> tensor;
  std::unique_ptr<HybridModel> hybrid;
  switch (cfg.model) {
    case ModelKind::bgk: {
      const double tau = bgk_tau(kernel);
      log << "BGK relaxation time tau = " << format_real(tau) << '\n';
      rhs = [tau](std::span<const double> f, std::span<double> out) { bgk_rhs(tau, f, out); };
      break;
    }
    case ModelKind::quadratic:
      tensor = std::make_shared<const CollisionTensor>(load_cached(cfg));
      rhs = [tensor](std::span<const double> f, std::span<double> out) { quadratic_rhs(*tensor, f, out); };
      break;
    case ModelKind::hybrid:
      tensor = std::make_shared<const CollisionTensor>(load_cached(cfg));
      hybrid = std::make_unique<HybridModel>(tensor, cfg.M);
      log << "tail decay rate nu = " << format_real(hybrid->nu()) << '\n';
      rhs = [h = hybrid.get()](std::span<const double> f, std::span<double> out) { hybrid_rhs(*h, f, out); };
      break;
  }

  SpectralState state = initial_state(cfg);
  std::optional<BkwReference> bkw;
  if (cfg.experiment == Experiment::bkw) bkw = BkwReference::from_kernel(kernel);
  const bool scaled = cfg.experiment == Experiment::discontinuous;
  const double tau_s = scaled ? scaled_time_constant(kernel) : 0.0;
  if (scaled) log << "time scale tau_s = " << format_real(tau_s) << '\n';

  const std::filesystem::path out_dir(cfg.output_dir);
  std::filesystem::create_directories(out_dir / "marginals");
  RunSummary summary;
  summary.trajectory_csv = out_dir / "trajectory.csv";
  std::ofstream traj = open_output(summary.trajectory_csv);
  {
    const auto cols = trajectory_columns(scaled);
    for (std::size_t c = 0; c < cols.size(); ++c) traj << (c ? "," : "") << cols[c];
    traj << '\n';
  }
  std::ofstream index = open_output(out_dir / "marginals" / "index.csv");
  index << "step,t,g_file,h_file\n";
  const auto v1 = grid(cfg.v_max, cfg.v_points);
  const auto v2d = grid(cfg.v_max, cfg.v_points_2d);

  auto observer = [&](int step, double t, const SpectralState& s) {
    traj << trajectory_row(t, s, tau_s) << '\n';
    const Moments m = moments(s);
    summary.max_rho_drift = std::max(summary.max_rho_drift, std::abs(m.rho - 1.0));
    summary.max_u_drift = std::max(summary.max_u_drift, std::hypot(m.u[0], m.u[1], m.u[2]));
    summary.max_theta_drift = std::max(summary.max_theta_drift, std::abs(m.theta - 1.0));
    if (bkw) {
      const SpectralState exact = bkw_coeffs(t, *bkw, s.M);
      for (std::size_t r = 0; r < s.coeffs.size(); ++r) {
        summary.max_bkw_deviation = std::max(summary.max_bkw_deviation, std::abs(s.coeffs[r] - exact.coeffs[r]));
      }
    }
    if (cfg.marginal_every > 0 && step % cfg.marginal_every == 0) {
      const auto tag = "step" + std::to_string(step);
      const auto g_path = out_dir / "marginals" / ("g_" + tag + ".csv");
      const auto h_path = out_dir / "marginals" / ("h_" + tag + ".csv");
      std::ofstream g = open_output(g_path);
      g << "v1,g\n";
      const auto gv = marginal_1d(s, v1);
      for (std::size_t i = 0; i < v1.size(); ++i) g << format_real(v1[i]) << ',' << format_real(gv[i]) << '\n';
      std::ofstream h = open_output(h_path);
      h << "v1,v2,h\n";
      const auto hv = marginal_2d(s, v2d, v2d);
      for (std::size_t i = 0; i < v2d.size(); ++i)
        for (std::size_t j = 0; j < v2d.size(); ++j)
          h << format_real(v2d[i]) << ',' << format_real(v2d[j]) << ',' << format_real(hv[i * v2d.size() + j]) << '\n';
      index << step << ',' << format_real(t) << ',' << g_path.filename().string() << ','
            << h_path.filename().string() << '\n';
      summary.marginal_files.push_back(g_path);
      summary.marginal_files.push_back(h_path);
    }
    summary.steps = step;
  };

  rk4_integrate(rhs, state, cfg.dt, cfg.t_end, observer);
  summary.final_state = state;

  log << "integrated " << summary.steps << " steps to t = " << format_real(cfg.t_end) << '\n'
      << "conservation drift: max|rho-1| = " << format_real(summary.max_rho_drift)
      << ", max|u| = " << format_real(summary.max_u_drift)
      << ", max|theta-1| = " << format_real(summary.max_theta_drift) << '\n';
  if (bkw) log << "max deviation from the BKW coefficients: " << format_real(summary.max_bkw_deviation) << '\n';
  log << "wrote " << summary.trajectory_csv.string() << " and " << summary.marginal_files.size()
      << " marginal files\n";
  return summary;
}

void cmd_info(const RunConfig& cfg, std::ostream& out)
{
  cfg.validate_kernel();
  const KernelModel kernel(cfg.eta, cfg.quad);
  const std::uint64_t bytes = memory_estimate(cfg.M0);
  out << "eta = " << format_real(cfg.eta) << '\n'
      << "N_M (M = " << cfg.M << ") = " << basis_size(cfg.M) << '\n'
      << "N_M0 (M0 = " << cfg.M0 << ") = " << basis_size(cfg.M0) << '\n'
      << "dense tensor memory = " << fixed(static_cast<double>(bytes) / kGiB, 4) << " GiB (" << bytes << " bytes)\n";
  const auto path = tensor_file(cfg);
  if (std::filesystem::exists(path)) {
    const CollisionTensor t = load(path, cfg.eta, cfg.M0);
    const double nu = spectral_radius(linearized_operator(t), SpectralMethod::automatic, hermite_norms(cfg.M0));
    out << "nu_M0 = " << format_real(nu) << '\n';
  } else {
    out << "nu_M0 = (no cached tensor)\n";
  }
  out << "tau_BGK = " << format_real(bgk_tau(kernel)) << '\n'
      << "tau_s = " << format_real(scaled_time_constant(kernel)) << '\n';
}

void cmd_cache_ls(const RunConfig& cfg, std::ostream& out)
{
  const std::filesystem::path dir(cfg.cache_dir);
  if (!std::filesystem::is_directory(dir)) {
    out << "no cache directory at " << dir.string() << '\n';
    return;
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".bin") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    try {
      const CollisionTensor t = load(f);
      out << f.filename().string() << "  eta=" << format_real(t.eta()) << " M0=" << t.M0() << " entries=" << t.size()
          << " bytes=" << std::filesystem::file_size(f) << '\n';
    } catch (const CacheFormatError& e) {
      out << f.filename().string() << "  unreadable: " << e.what() << '\n';
    }
  }
  if (files.empty()) out << "cache is empty\n";
}

int cmd_cache_rm(const RunConfig& cfg, bool all, std::ostream& out)
{
  int removed = 0;
  if (all) {
    const std::filesystem::path dir(cfg.cache_dir);
    if (!std::filesystem::is_directory(dir)) return 0;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      const auto name = entry.path().filename().string();
      if (entry.is_regular_file() && name.starts_with("A_eta") && entry.path().extension() == ".bin") {
        files.push_back(entry.path());
      }
    }
    for (const auto& f : files) {
      std::filesystem::remove(f);
      out << "removed " << f.string() << '\n';
      ++removed;
    }
    return removed;
  }
  const auto path = tensor_file(cfg);
  if (std::filesystem::remove(path)) {
    out << "removed " << path.string() << '\n';
    ++removed;
  } else {
    out << "nothing to remove at " << path.string() << '\n';
  }
  return removed;
}

ExitCode exit_code_for(const std::exception_ptr& error)
{
  try {
    std::rethrow_exception(error);
  } catch (const ConfigError&) {
    return ExitCode::config;
  } catch (const CacheMissError&) {
    return ExitCode::cache_miss;
  } catch (const StaleCacheError&) {
    return ExitCode::cache_miss;
  } catch (const MemoryCapError&) {
    return ExitCode::memory_refusal;
  } catch (const CacheFormatError&) {
    return ExitCode::cache_format;
  } catch (const ConvergenceError&) {
    return ExitCode::numerical;
  } catch (const NumericalError&) {
    return ExitCode::numerical;
  } catch (const ContractError&) {
    return ExitCode::usage;
  } catch (const std::domain_error&) {
    return ExitCode::config;
  } catch (...) {
    return ExitCode::numerical;
  }
}

}  // namespace hboltz
