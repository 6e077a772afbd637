#pragma once

// Independent reference computations used only by the tests. None of these
// share code paths with the library routines they check.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace oracle {

/// Horner evaluation of sum c[i] x^i.
inline double poly_eval(const std::vector<double>& c, double x)
{
  double s = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
  return s;
}

/// He_n from n symbolic derivatives of exp(-x^2/2):
/// d/dx [p e^{-x^2/2}] = (p' - x p) e^{-x^2/2}, He_n = (-1)^n e^{x^2/2} D^n e^{-x^2/2}.
inline std::vector<double> hermite_coefficients(int n)
{
  std::vector<double> p{1.0};
  for (int k = 0; k < n; ++k) {
    std::vector<double> q(p.size() + 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      q[i + 1] += p[i];                                  // x p
      if (i > 0) q[i - 1] -= static_cast<double>(i) * p[i];  // -p'
    }
    p = std::move(q);
  }
  return p;
}

inline double hermite(int n, double x) { return poly_eval(hermite_coefficients(n), x); }

/// L_n^{(alpha)} from the Rodrigues form x^{-alpha} e^x / n! D^n (e^{-x} x^{n+alpha}).
inline double laguerre(int n, double alpha, double x)
{
  // D^j (e^{-x} x^{n+alpha}) = e^{-x} sum_t c_t x^{n+alpha-t}
  std::vector<double> c{1.0};
  for (int j = 0; j < n; ++j) {
    std::vector<double> d(c.size() + 1, 0.0);
    for (std::size_t t = 0; t < c.size(); ++t) {
      d[t] -= c[t];
      d[t + 1] += c[t] * (n + alpha - static_cast<double>(t));
    }
    c = std::move(d);
  }
  double s = 0.0;
  for (std::size_t t = 0; t < c.size(); ++t) s += c[t] * std::pow(x, n - static_cast<double>(t));
  return s / std::tgamma(n + 1.0);
}

/// P_n from the Rodrigues form 1/(2^n n!) D^n (x^2 - 1)^n.
inline double legendre(int n, double x)
{
  double s = 0.0;
  for (int j = 0; j <= n; ++j) {
    if (2 * j < n) continue;
    const double binom = std::tgamma(n + 1.0) / (std::tgamma(j + 1.0) * std::tgamma(n - j + 1.0));
    const double sign = (n - j) % 2 == 0 ? 1.0 : -1.0;
    const double falling = std::tgamma(2.0 * j + 1.0) / std::tgamma(2.0 * j - n + 1.0);
    s += sign * binom * falling * std::pow(x, 2 * j - n);
  }
  return s / (std::pow(2.0, n) * std::tgamma(n + 1.0));
}

/// P_k(cos chi) - 1 from P_k(x) = sum_j binom(k,j) binom(k+j,j) ((x-1)/2)^j
/// with (x-1)/2 = -sin^2(chi/2), so small angles lose nothing.
inline double legendre_cos_minus_one(int k, double chi)
{
  const double t = -std::pow(std::sin(chi / 2.0), 2);
  double s = 0.0;
  double binom_k = 1.0;
  double binom_kj = 1.0;
  for (int j = 1; j <= k; ++j) {
    binom_k *= static_cast<double>(k - j + 1) / j;
    binom_kj *= static_cast<double>(k + j) / j;
    s += binom_k * binom_kj * std::pow(t, j);
  }
  return s;
}

/// chi(y) = pi - 2 int_0^1 sqrt(1-y) / sqrt(D) dx by tanh-sinh, which copes
/// with the inverse square root at x = 1 without any substitution.
inline double chi(double eta, double y)
{
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [&](double x, double xc) {
    double one_minus_x2;
    double one_minus_pow;
    if (x > 0.5) {
      // xc = 1 - x, accurate near the endpoint
      one_minus_x2 = xc * (2.0 - xc);
      one_minus_pow = -std::expm1((eta - 1.0) * std::log1p(-xc));
    } else {
      one_minus_x2 = 1.0 - x * x;
      one_minus_pow = 1.0 - std::pow(x, eta - 1.0);
    }
    const double d = (1.0 - y) * one_minus_x2 + y * one_minus_pow;
    return std::sqrt(1.0 - y) / std::sqrt(d);
  };
  return std::numbers::pi - 2.0 * ts.integrate(f, 0.0, 1.0);
}

/// int_0^inf L_m^{(alpha)}(s) L_n^{(alpha)}(s) s^mu e^{-s} ds by exp-sinh,
/// with the Laguerre factors from the Rodrigues form.
inline double laguerre_product_moment(int m, int n, double alpha, double mu)
{
  boost::math::quadrature::exp_sinh<double> es;
  auto f = [&](double s) {
    if (s > 700.0) return 0.0;
    return laguerre(m, alpha, s) * laguerre(n, alpha, s) * std::pow(s, mu) * std::exp(-s);
  };
  return es.integrate(f, 1e-13);
}

/// W0(y) = sqrt(1-y) ((eta-1) y / 2)^{-1/(eta-1)} and its derivative, taken
/// term by term (not through the simplified y-measure of the library).
inline double w0(double eta, double y) { return std::sqrt(1.0 - y) * std::pow((eta - 1.0) * y / 2.0, -1.0 / (eta - 1.0)); }

inline double w0_prime(double eta, double y)
{
  const double base = std::pow((eta - 1.0) * y / 2.0, -1.0 / (eta - 1.0));
  return -0.5 / std::sqrt(1.0 - y) * base - std::sqrt(1.0 - y) * base / ((eta - 1.0) * y);
}

/// Deterministic generator for randomized property checks.
inline std::mt19937_64 rng(unsigned seed) { return std::mt19937_64(seed); }

}  // namespace oracle
