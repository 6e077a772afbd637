#pragma once

#include <functional>
#include <span>
#include <vector>

namespace hboltz {

/// Tolerances for the adaptive integrators.
struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 200;

  /// Throws ConfigError on non-positive tolerances or max_subdivisions < 1.
  void validate() const;

  QuadratureSpec halved() const { return {abs_tol / 2, rel_tol / 2, max_subdivisions}; }
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

/// Nodes and weights of an interpolatory rule.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (G10/K21) integration over the given
/// initial breakpoints (at least two, ascending). The interval with the
/// largest error estimate is bisected until the total estimate meets
/// max(abs_tol, rel_tol * |value|). Throws ConvergenceError when more than
/// spec.max_subdivisions bisections would be required.
QuadratureResult integrate_adaptive(const Integrand& f, std::span<const double> breakpoints,
                                    const QuadratureSpec& spec);

QuadratureResult integrate_adaptive(const Integrand& f, double a, double b, const QuadratureSpec& spec);

/// Breakpoints 0, 2^-depth, ..., 1/4, 1/2, 1 scaled onto [0, length], for
/// integrands with an endpoint singularity at zero.
std::vector<double> graded_breakpoints(double length, int depth);

/// Composite Gauss-Legendre on [a, b]: each panel is compared with its two
/// halves and split until they agree to tol (absolute).
double integrate_gauss_legendre_adaptive(const Integrand& f, double a, double b, double tol, int max_depth = 40);

/// n-point Gauss-Legendre rule on [-1, 1].
Rule gauss_legendre(int n);

/// n-point Gauss-Hermite rule for the standard normal density: sum w_i p(x_i)
/// equals E[p(X)], X ~ N(0,1), for polynomials of degree < 2n.
Rule gauss_hermite_normal(int n);

/// n-point generalized Gauss-Laguerre rule for the weight x^alpha e^{-x}.
Rule gauss_laguerre(int n, double alpha);

}  // namespace hboltz
