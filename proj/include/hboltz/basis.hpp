#pragma once

// Multi-index bookkeeping and the polynomial families used by the
// Hermite-Galerkin discretization.

#include <array>
#include <compare>
#include <cstddef>
#include <span>
#include <vector>

namespace hboltz {

using Vec3 = std::array<double, 3>;

/// Polynomial degrees (k1, k2, k3) of a tensor-product Hermite basis function.
struct MultiIndex {
  int k1 = 0;
  int k2 = 0;
  int k3 = 0;

  constexpr int degree() const noexcept { return k1 + k2 + k3; }
  constexpr int operator[](int s) const noexcept { return s == 0 ? k1 : (s == 1 ? k2 : k3); }
  constexpr bool all_even() const noexcept { return k1 % 2 == 0 && k2 % 2 == 0 && k3 % 2 == 0; }

  friend constexpr auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
};

/// N_M = (M+1)(M+2)(M+3)/6, the number of triples of total degree <= M.
constexpr std::size_t basis_size(int M) noexcept
{
  if (M < 0) return 0;
  const auto m = static_cast<std::size_t>(M);
  return (m + 1) * (m + 2) * (m + 3) / 6;
}

/// Graded ordering: ascending total degree; within a degree, k1 descending
/// then k2 descending, so (1,0,0) < (0,1,0) < (0,0,1). Because the order is
/// degree-major, I_M is always the prefix [0, N_M) of I_{M'} for M' >= M.
std::size_t rank(const MultiIndex& idx);

/// Inverse of rank() on I_M. Throws std::out_of_range when r >= N_M.
MultiIndex unrank(std::size_t r, int M);

/// All triples of I_M in rank order.
std::vector<MultiIndex> index_set(int M);

/// Probabilists' Hermite polynomial He_n(x).
double hermite(int n, double x);

/// Fills out[0..n] with He_0(x) .. He_n(x).
void hermite_all(double x, std::span<double> out);

/// H^{k1k2k3}(v) = He_{k1}(v1) He_{k2}(v2) He_{k3}(v3).
double hermite_eval(const MultiIndex& idx, const Vec3& v);

/// Generalized Laguerre polynomial L_n^{(alpha)}(x); alpha must exceed -1.
double laguerre_eval(int n, double alpha, double x);

/// Legendre polynomial P_k(x) by the Bonnet recurrence.
double legendre_eval(int k, double x);

/// P_k(cos chi) - 1 without cancellation for small angles.
double legendre_cos_minus_one(int k, double chi);

double log_factorial(int n);

/// log((2n+1)!!) for n >= -1 (with (-1)!! = 1).
double log_odd_double_factorial(int n);

/// Coefficient a_{i'j'}^{ij} of the Hermite splitting identity for
/// v = h + g/2, w = h - g/2. Requires ip + jp == i + j.
double a_coeff(int i, int j, int ip, int jp);

/// C_{m}^{k} = (-1)^m 4 pi m! / (2(k-m)+1)!! * k1!k2!k3! / (m1!m2!m3!).
double c_coeff(const MultiIndex& k, const MultiIndex& m);

}  // namespace hboltz
