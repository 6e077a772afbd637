#pragma once

// Time integration, moments, initial data and the BKW reference solution.

#include <array>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hboltz/basis.hpp"
#include "hboltz/ipl_kernel.hpp"

namespace hboltz {

/// Hermite coefficients f_k over I_M in rank order.
struct SpectralState {
  int M = 0;
  std::vector<double> coeffs;

  SpectralState() = default;
  explicit SpectralState(int M_) : M(M_), coeffs(basis_size(M_), 0.0) {}

  /// f_000 = 1, everything else 0.
  static SpectralState maxwellian(int M_);

  /// f_k, or 0 when |k| > M.
  double operator[](const MultiIndex& k) const;
  double& at(const MultiIndex& k);

  /// Zero-padded or truncated copy over I_{M'}.
  SpectralState resized(int M_) const;
};

struct Moments {
  double rho = 0.0;
  Vec3 u{};
  double theta = 0.0;
  std::array<Vec3, 3> sigma{};
  Vec3 q{};
  bool has_heat_flux = false;  // false when M < 3
};

/// Density, velocity and temperature from the degree <= 2 coefficients; the
/// stress from the centred second moments; heat flux from
/// q_1 = 3 f_300 + f_120 + f_102 and its cyclic versions (exact for u = 0).
Moments moments(const SpectralState& state);

using RhsFunction = std::function<void(std::span<const double> f, std::span<double> out)>;

/// Called at t = 0 and after every step.
using Observer = std::function<void(int step, double t, const SpectralState& state)>;

/// Classical fixed-step RK4 from t = 0 to t_end. The last step is shortened
/// if dt does not divide t_end. Throws NumericalError, carrying the last
/// finite time, when the state stops being finite.
void rk4_integrate(const RhsFunction& rhs, SpectralState& state, double dt, double t_end, const Observer& observer = {});

/// Number of steps rk4_integrate takes.
int rk4_step_count(double dt, double t_end);

/// BKW exact solution for Maxwell molecules,
/// tau(t) = 1 - exp((pi/3) b2 (t + t0)).
struct BkwReference {
  double b2 = 0.0;
  double t0 = 0.0;

  /// b2 = 2^{-1/2} I(2, 5) from the kernel, t0 from -(pi/3) b2 t0 = 0.92.
  /// Throws NumericalError if I(2, 5) is not negative.
  static BkwReference from_kernel(const KernelModel& maxwell);

  /// Throws std::domain_error when -(pi/3) b2 t0 < log(5/2) or b2 >= 0.
  BkwReference(double b2_, double t0_);
  BkwReference() = default;

  double decay(double t) const;  // E(t) = exp((pi/3) b2 (t + t0))
  double tau(double t) const { return 1.0 - decay(t); }
};

/// Exact coefficients: (-E/2)^{|k|/2} (1 - |k|/2) / prod (k_i/2)! for
/// all-even k, zero otherwise.
SpectralState bkw_coeffs(double t, const BkwReference& ref, int M);

/// Analytic v1-marginal of the BKW distribution.
double bkw_marginal(double t, const BkwReference& ref, double v1);

/// Hermite coefficients of the 1-D normal density N(c, s2) up to degree n.
std::vector<double> gaussian_hermite_coeffs(double c, double s2, int n);

/// Symmetric two-Gaussian mixture 1/2 [N(-a, 1/2) + N(a, 1/2)] in v1 with
/// a = sqrt(3/2), times N(0, 1/2) in v2 and v3. Closed-form coefficients are
/// cross-checked against Gauss-Hermite quadrature; disagreement above 1e-10
/// throws NumericalError.
SpectralState project_bigaussian(int M);

/// Piecewise Gaussian: A exp(-|v|^2/sqrt2) for v1 > 0 and
/// (A/4) exp(-|v|^2/(2 sqrt2)) for v1 < 0, A = 2^{1/4}(2 - sqrt2)/pi^{3/2}.
SpectralState project_discontinuous(int M, const QuadratureSpec& quad = {});

/// g(v1) = sum_{k1} f_{k1,0,0} He_{k1}(v1) M_1(v1).
std::vector<double> marginal_1d(const SpectralState& state, std::span<const double> v1);

/// h(v1, v2) on the tensor grid, v2 fastest.
std::vector<double> marginal_2d(const SpectralState& state, std::span<const double> v1, std::span<const double> v2);

/// Column names of the trajectory CSV.
std::vector<std::string> trajectory_columns(bool with_scaled_time);

/// One trajectory CSV row (without the trailing newline).
std::string trajectory_row(double t, const SpectralState& state, double time_scale = 0.0);

}  // namespace hboltz
