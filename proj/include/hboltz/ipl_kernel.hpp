#pragma once

// Inverse-power-law collision kernel: deflection angle, angular integrals
// I(k, eta), the radial Laguerre integrals K and the relaxation-time constants.

#include <memory>

#include "hboltz/quadrature.hpp"

namespace hboltz {

/// Deflection angle chi(y) in [0, pi] for the repulsive r^{-eta} potential,
/// y in (0, 1] being the rescaled impact-parameter variable (y = 1 is a
/// head-on collision). Throws std::domain_error outside eta > 3, 0 < y <= 1.
double chi_of_y(double eta, double y);

/// The y-measure [2(1-y) + (eta-1)y] [(eta-1)y]^{-(eta+1)/(eta-1)}.
double kernel_y_weight(double eta, double y);

/// 2^{-(eta-3)/(eta-1)}, the constant linking W0 dW0 to the y-measure.
double kernel_prefactor(double eta);

/// The IPL kernel together with its cached angular integrals I(k, eta).
///
/// I(k, eta) = int_0^1 [P_k(cos chi(y)) - 1] [2(1-y) + (eta-1)y]
///             [(eta-1)y]^{-(eta+1)/(eta-1)} dy
///
/// Requesting I(k) fills the cache for every k' <= k. Cache fills are
/// synchronized, so one model may be shared between threads.
class KernelModel {
 public:
  explicit KernelModel(double eta, QuadratureSpec quad = {});

  double eta() const noexcept { return eta_; }
  const QuadratureSpec& quadrature() const noexcept { return quad_; }

  /// Maxwell molecules are detected by exact comparison with 5.
  bool is_maxwell() const noexcept { return eta_ == 5.0; }

  /// chi(y), memoized by the exact value of y.
  double chi(double y) const;

  /// I(k, eta) with its quadrature error estimate.
  QuadratureResult i_integral_result(int k) const;
  double i_integral(int k) const { return i_integral_result(k).value; }

  /// The g-independent factor 2^{-(eta-3)/(eta-1)} I(k, eta) of the
  /// angular kernel integral.
  double b_tilde(int k) const { return kernel_prefactor(eta_) * i_integral(k); }

  /// Number of I(k) entries currently cached.
  int cached_degrees() const;

 private:
  struct State;
  double eta_;
  QuadratureSpec quad_;
  std::shared_ptr<State> state_;
};

/// Stand-alone I(k, eta) (uncached).
double i_integral(int k, double eta, const QuadratureSpec& quad = {});

/// Generalized binomial coefficient binom(x, r) for real x, integer r >= 0.
double generalized_binomial(double x, int r);

/// Closed form of int_0^inf L_m^{(alpha)}(s) L_n^{(alpha)}(s) s^mu e^{-s} ds.
double laguerre_product_moment(int m, int n, double alpha, double mu);

/// Radial kernel integral K_{mn}^{kl}. Requires 0 <= 2m <= k and 0 <= 2n <= l;
/// returns zero when k - 2m != l - 2n. For eta == 5 the Laguerre
/// orthogonality shortcut is used (zero for m != n).
double k_coeff(int k, int l, int m, int n, const KernelModel& model);

/// A_2(eta) = int_0^inf W0 sin^2 chi dW0 = -(2/3) 2^{-(eta-3)/(eta-1)} I(2, eta).
double a2_integral(const KernelModel& model);

/// Mean relaxation time of the BGK approximation to the IPL gas.
double bgk_tau(const KernelModel& model);

/// Time scale that gives the model the same near-equilibrium relaxation time
/// as Maxwell molecules. Equals 1 for eta == 5.
double scaled_time_constant(const KernelModel& model, const KernelModel& maxwell);
double scaled_time_constant(const KernelModel& model);

}  // namespace hboltz
