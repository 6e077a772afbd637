// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failures.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "hboltz/basis.hpp"
#include "hboltz/collision_models.hpp"
#include "hboltz/collision_tensor.hpp"
#include "hboltz/ipl_kernel.hpp"
#include "hboltz/solver.hpp"
#include "oracles.hpp"

using namespace hboltz;

namespace {

// Tolerances.
constexpr double kMemoryRelTol = 5e-3;
constexpr double kBkwRelTol = 1e-5;
constexpr double kCrossM0Tol = 1e-12;
constexpr double kConservationTol = 1e-10;
constexpr double kGammaRelTol = 1e-5;
constexpr double kTensorIdentityTol = 1e-10;
constexpr double kMaxwellSparsityTol = 1e-12;
constexpr double kRadialRelTol = 1e-8;
constexpr double kSplittingTol = 1e-9;
constexpr double kTauS = 1.36017;
constexpr double kTauSTol = 1e-4;
constexpr double kBgkRelTol = 1e-6;
constexpr double kTimingFactor = 3.0;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double x)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::shared_ptr<const CollisionTensor> tensor(double eta, int M0)
{
  static std::map<std::pair<double, int>, std::shared_ptr<const CollisionTensor>> cache;
  auto& slot = cache[{eta, M0}];
  if (!slot) slot = std::make_shared<const CollisionTensor>(assemble(M0, KernelModel(eta)));
  return slot;
}

// Trajectory of a hybrid run: one state per step.
std::vector<SpectralState> hybrid_run(double eta, int M0, int M, const SpectralState& init, double dt, double t_end)
{
  const HybridModel model(tensor(eta, M0), M);
  SpectralState s = init.resized(M);
  std::vector<SpectralState> out;
  rk4_integrate([&](std::span<const double> f, std::span<double> o) { hybrid_rhs(model, f, o); }, s, dt, t_end,
                [&](int, double, const SpectralState& st) { out.push_back(st); });
  return out;
}

Outcome index_space()
{
  bool ok = basis_size(20) == 1771;
  for (int M = 0; M <= 40; ++M) {
    std::size_t count = 0;
    for (int a = 0; a <= M; ++a)
      for (int b = 0; a + b <= M; ++b) count += static_cast<std::size_t>(M - a - b + 1);
    ok = ok && basis_size(M) == count && index_set(M).size() == count;
  }
  return {ok, "N_20 = " + std::to_string(basis_size(20)) + ", N_M = enumeration for M <= 40"};
}

Outcome memory_model()
{
  const std::array<std::pair<int, double>, 8> table{
      {{5, 1.308e-3}, {10, 0.1743}, {15, 4.048}, {20, 41.38}, {25, 2.620e2}, {30, 1.210e3}, {35, 4.473e3}, {40, 1.400e4}}};
  double worst = 0.0;
  for (const auto& [M0, gib] : table) {
    const double got = static_cast<double>(memory_estimate(M0)) / static_cast<double>(1ull << 30);
    worst = std::max(worst, std::abs(got - gib) / gib);
  }
  return {worst <= kMemoryRelTol, "max rel deviation from the table " + fmt("%.2e", worst)};
}

Outcome bkw()
{
  const KernelModel maxwell(5.0);
  const BkwReference ref = BkwReference::from_kernel(maxwell);
  const int M = 10;
  const double dt = 0.01;
  const SpectralState init = bkw_coeffs(0.0, ref, M);
  double worst = 0.0;
  double spread = 0.0;
  std::vector<SpectralState> first;
  for (int M0 : {4, 5, 8}) {
    const auto traj = hybrid_run(5.0, M0, M, init, dt, 1.0);
    for (std::size_t step = 0; step < traj.size(); ++step) {
      const double t = static_cast<double>(step) * dt;
      const SpectralState exact = bkw_coeffs(t, ref, M);
      for (MultiIndex k : {MultiIndex{4, 0, 0}, MultiIndex{2, 2, 0}}) {
        worst = std::max(worst, std::abs(traj[step][k] - exact[k]) / std::abs(exact[k]));
      }
    }
    if (first.empty()) {
      first = traj;
    } else {
      // degree <= 4 never sees the damped tail, so these must agree
      for (std::size_t step = 0; step < traj.size(); ++step)
        for (std::size_t r = 0; r < basis_size(4); ++r)
          spread = std::max(spread, std::abs(traj[step].coeffs[r] - first[step].coeffs[r]));
    }
  }
  return {worst <= kBkwRelTol && spread <= kCrossM0Tol,
          "f400/f220 max rel err " + fmt("%.2e", worst) + ", max diff of degree <= 4 across M0 " + fmt("%.2e", spread)};
}

Outcome conservation()
{
  const int M = 10, M0 = 5;
  const double dt = 0.01, t_end = 5.0;
  double worst = 0.0;
  auto track = [&](double eta, const SpectralState& init) {
    for (const auto& s : hybrid_run(eta, M0, M, init, dt, t_end)) {
      const Moments m = moments(s);
      worst = std::max({worst, std::abs(m.rho - 1.0), std::hypot(m.u[0], m.u[1], m.u[2]), std::abs(m.theta - 1.0)});
    }
  };
  track(5.0, bkw_coeffs(0.0, BkwReference::from_kernel(KernelModel(5.0)), M));
  for (double eta : {3.1, 5.0, 10.0}) {
    track(eta, project_bigaussian(M));
    track(eta, project_discontinuous(M));
  }
  return {worst <= kConservationTol, "7 hybrid runs (M=10, M0=5, t<=5), max drift " + fmt("%.2e", worst)};
}

Outcome gamma_oracle()
{
  const int D = 3;
  const std::size_t N = basis_size(D);
  double worst = 0.0;
  bool zeros_ok = true;
  for (double eta : {5.0, 10.0}) {
    const KernelModel model(eta);
    const auto direct = gamma_direct_oracle_table(D, model);
    double scale = 0.0;
    for (double v : direct) scale = std::max(scale, std::abs(v));
    for (std::size_t a = 0; a < N; ++a) {
      for (std::size_t b = 0; b < N; ++b) {
        const double formula = gamma_coeff(unrank(a, D), unrank(b, D), model);
        const double d = direct[a * N + b];
        // structurally zero entries have no meaningful relative error
        if (std::abs(d) > 1e-9 * scale) {
          worst = std::max(worst, std::abs(formula - d) / std::abs(d));
        } else {
          zeros_ok = zeros_ok && std::abs(formula) <= 1e-9 * scale;
        }
      }
    }
  }
  return {worst <= kGammaRelTol && zeros_ok,
          std::to_string(N * N) + " pairs per eta, max rel err " + fmt("%.2e", worst) + (zeros_ok ? "" : ", zero pattern differs")};
}

Outcome tensor_identities()
{
  double worst = 0.0;
  for (double eta : {3.1, 5.0, 10.0}) {
    for (int M0 = 2; M0 <= 6; ++M0) {
      const auto A = tensor(eta, M0);
      const std::size_t N = basis_size(M0);
      const std::size_t r200 = rank({2, 0, 0}), r020 = rank({0, 2, 0}), r002 = rank({0, 0, 2});
      for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = i; j < N; ++j) {
          for (std::size_t k = 0; k < 4; ++k) worst = std::max(worst, std::abs(A->value(k, i, j)));
          worst = std::max(worst, std::abs(A->value(r200, i, j) + A->value(r020, i, j) + A->value(r002, i, j)));
        }
      }
    }
  }
  return {worst <= kTensorIdentityTol, "M0 = 2..6, eta in {3.1, 5, 10}, max |violation| " + fmt("%.2e", worst)};
}

Outcome maxwell_sparsity()
{
  const auto A = tensor(5.0, 6);
  const auto idx = index_set(6);
  double worst = 0.0;
  std::size_t kept = 0;
  for (const auto& e : A->entries()) {
    if (idx[e.i].degree() + idx[e.j].degree() != idx[e.k].degree()) {
      worst = std::max(worst, std::abs(e.value));
    } else {
      ++kept;
    }
  }
  return {worst <= kMaxwellSparsityTol,
          std::to_string(kept) + " degree-balanced entries, max off-balance " + fmt("%.2e", worst)};
}

Outcome radial_closed_form()
{
  double worst = 0.0;
  int count = 0;
  for (double eta : {5.0, 10.0}) {
    const KernelModel model(eta);
    const double c0 = (eta - 3.0) / (eta - 1.0);
    for (int k = 0; k <= 6; ++k) {
      for (int l = 0; l <= 6; ++l) {
        for (int m = 0; 2 * m <= k; ++m) {
          const int r = k - 2 * m;
          if ((l - r) % 2 != 0 || l < r) continue;
          const int n = (l - r) / 2;
          const double alpha = r + 0.5;
          const double mu = c0 + r;
          const double closed = laguerre_product_moment(m, n, alpha, mu);
          const double brute = oracle::laguerre_product_moment(m, n, alpha, mu);
          // Laguerre norms bound the integral; they set the scale where it vanishes
          const double norm = std::sqrt(std::tgamma(m + alpha + 1) / std::tgamma(m + 1.0) *
                                        std::tgamma(n + alpha + 1) / std::tgamma(n + 1.0));
          worst = std::max(worst, std::abs(closed - brute) / std::max(std::abs(brute), norm));
          if (r > 0) {
            const double K = k_coeff(k, l, m, n, model);
            const double Kbrute = std::pow(2.0, mu) * model.i_integral(r) * brute;
            const double Kscale = std::pow(2.0, mu) * std::abs(model.i_integral(r)) * norm;
            worst = std::max(worst, std::abs(K - Kbrute) / std::max(std::abs(Kbrute), Kscale));
          }
          ++count;
        }
      }
    }
  }
  return {worst <= kRadialRelTol, std::to_string(count) + " (k,l,m,n) cases, max rel err " + fmt("%.2e", worst)};
}

Outcome splitting_identity()
{
  auto gen = oracle::rng(12345);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  const int D = 6;
  const auto idx = index_set(D);
  // a_{i'j'}^{ij} for one axis, indexed [i][j][i']
  std::vector<double> a((D + 1) * (D + 1) * (2 * D + 1), 0.0);
  auto at = [&](int i, int j, int ip) -> double& { return a[(i * (D + 1) + j) * (2 * D + 1) + ip]; };
  for (int i = 0; i <= D; ++i)
    for (int j = 0; j <= D; ++j)
      for (int ip = 0; ip <= i + j; ++ip) at(i, j, ip) = a_coeff(i, j, ip, i + j - ip);

  double worst = 0.0;
  for (int p = 0; p < 100; ++p) {
    Vec3 h, g;
    for (int s = 0; s < 3; ++s) {
      h[s] = dist(gen);
      g[s] = dist(gen);
    }
    // one-axis Hermite values
    std::array<std::vector<double>, 3> Hv, Hw, Hh, Hg;
    for (int s = 0; s < 3; ++s) {
      for (int n = 0; n <= 2 * D; ++n) {
        Hv[s].push_back(oracle::hermite(n, h[s] + g[s] / 2));
        Hw[s].push_back(oracle::hermite(n, h[s] - g[s] / 2));
        Hh[s].push_back(oracle::hermite(n, std::sqrt(2.0) * h[s]));
        Hg[s].push_back(oracle::hermite(n, g[s] / std::sqrt(2.0)));
      }
    }
    for (const auto& k : idx) {
      for (const auto& l : idx) {
        double lhs = 1.0, rhs = 1.0;
        for (int s = 0; s < 3; ++s) {
          lhs *= Hv[s][k[s]] * Hw[s][l[s]];
          double axis = 0.0;
          for (int kp = 0; kp <= k[s] + l[s]; ++kp) axis += at(k[s], l[s], kp) * Hh[s][kp] * Hg[s][k[s] + l[s] - kp];
          rhs *= axis;
        }
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
      }
    }
  }
  return {worst <= kSplittingTol, "|k|, |l| <= 6 at 100 random points, max rel err " + fmt("%.2e", worst)};
}

Outcome scaling_constant()
{
  const double got = scaled_time_constant(KernelModel(3.1));
  return {std::abs(got - kTauS) <= kTauSTol, "tau_s(3.1) = " + fmt("%.8f", got)};
}

Outcome discontinuous_shape()
{
  const double dt = 0.01, t_end = 10.0;
  const auto traj = hybrid_run(10.0, 5, 20, project_discontinuous(20), dt, t_end);
  std::string detail;
  bool ok = true;
  for (int a = 0; a < 2; ++a) {
    std::vector<double> sig;
    for (const auto& s : traj) sig.push_back(moments(s).sigma[a][a]);
    std::size_t peak = 0;
    for (std::size_t i = 0; i < sig.size(); ++i)
      if (std::abs(sig[i]) > std::abs(sig[peak])) peak = i;
    const double start = sig.front(), extremum = sig[peak], end = sig.back();
    // rises monotonically in magnitude to the extremum, then falls monotonically
    bool unimodal = true;
    for (std::size_t i = 1; i <= peak; ++i) unimodal = unimodal && std::abs(sig[i]) >= std::abs(sig[i - 1]) - 1e-14;
    for (std::size_t i = peak + 1; i < sig.size(); ++i) unimodal = unimodal && std::abs(sig[i]) <= std::abs(sig[i - 1]) + 1e-14;
    const bool this_ok = std::abs(start) <= 1e-10 && peak > 0 && peak + 1 < sig.size() && std::abs(end) <= 0.1 * std::abs(extremum) &&
                         unimodal;
    ok = ok && this_ok;
    detail += std::string(a == 0 ? "sigma11" : ", sigma22") + ": 0 -> " + fmt("%.4g", extremum) + " at t=" +
              fmt("%.2f", static_cast<double>(peak) * dt) + " -> " + fmt("%.2e", end) + " at t=" + fmt("%.0f", t_end);
  }
  return {ok, detail};
}

Outcome bgk_decay()
{
  const double dt = 0.01, t_end = 5.0;
  const int M = 10;
  double worst = 0.0;
  for (double eta : {3.1, 5.0, 10.0}) {
    const double tau = bgk_tau(KernelModel(eta));
    for (const SpectralState& init : {project_bigaussian(M), project_discontinuous(M)}) {
      SpectralState s = init;
      rk4_integrate([&](std::span<const double> f, std::span<double> o) { bgk_rhs(tau, f, o); }, s, dt, t_end,
                    [&](int step, double t, const SpectralState& st) {
                      if (step == 0) return;
                      const double decay = std::exp(-t / tau);
                      for (std::size_t r = 1; r < st.coeffs.size(); ++r) {
                        if (std::abs(init.coeffs[r]) < 1e-14) continue;
                        worst = std::max(worst, std::abs(st.coeffs[r] / (init.coeffs[r] * decay) - 1.0));
                      }
                    });
    }
  }
  return {worst <= kBgkRelTol, "6 runs, dt=0.01, t<=5, max rel err " + fmt("%.2e", worst)};
}

Outcome rhs_timing()
{
  std::vector<double> per_call;
  std::string detail;
  for (int M0 : {4, 6, 8}) {
    const auto A = tensor(10.0, M0);
    std::vector<double> f(basis_size(M0), 0.01), out(basis_size(M0));
    f[0] = 1.0;
    int reps = 0;
    const auto start = std::chrono::steady_clock::now();
    double elapsed = 0.0;
    while (elapsed < 0.3) {
      quadratic_rhs(*A, f, out);
      ++reps;
      elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    per_call.push_back(elapsed / reps);
  }
  bool ok = true;
  const double n4 = static_cast<double>(basis_size(4));
  for (int idx = 1; idx < 3; ++idx) {
    const int M0 = idx == 1 ? 6 : 8;
    const double expected = std::pow(static_cast<double>(basis_size(M0)) / n4, 3);
    const double measured = per_call[idx] / per_call[0];
    ok = ok && measured <= kTimingFactor * expected && measured >= expected / kTimingFactor;
    detail += (idx > 1 ? ", " : "") + std::string("M0=") + std::to_string(M0) + " ratio " + fmt("%.1f", measured) +
              " vs N^3 " + fmt("%.1f", expected);
  }
  return {ok, detail};
}

}  // namespace

int main()
{
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 index-space arithmetic", index_space},
      {"2 memory model", memory_model},
      {"3 BKW end-to-end", bkw},
      {"4 conservation", conservation},
      {"5 gamma sum vs direct quadrature", gamma_oracle},
      {"6 tensor conservation identities", tensor_identities},
      {"7 Maxwell sparsity", maxwell_sparsity},
      {"8 radial closed form", radial_closed_form},
      {"9 Hermite splitting identity", splitting_identity},
      {"10 scaling constant", scaling_constant},
      {"11 discontinuous stress shape", discontinuous_shape},
      {"12 BGK decay", bgk_decay},
      {"timing RHS ~ N^3", rhs_timing},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s [%s] %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
