#include "hboltz/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hboltz/basis.hpp"
#include "hboltz/errors.hpp"

namespace hboltz {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
using Gauss = boost::math::quadrature::gauss<double, 10>;

struct Panel {
  double a;
  double b;
  double value;
  double error;
};

Panel gk21(const Integrand& f, double a, double b)
{
  const auto& x = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  std::array<double, 21> fv{};
  fv[0] = f(center);
  double kronrod = fv[0] * wk[0];
  double gauss = 0.0;
  double absk = std::abs(fv[0]) * wk[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double fp = f(center + half * x[i]);
    const double fm = f(center - half * x[i]);
    fv[2 * i - 1] = fp;
    fv[2 * i] = fm;
    kronrod += (fp + fm) * wk[i];
    absk += (std::abs(fp) + std::abs(fm)) * wk[i];
    if (i % 2 == 1) gauss += (fp + fm) * wg[i / 2];
  }
  const double mean = 0.5 * kronrod;
  double asc = std::abs(fv[0] - mean) * wk[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    asc += (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean)) * wk[i];
  }

  // QUADPACK-style error scaling
  double err = std::abs((kronrod - gauss) * half);
  const double resasc = asc * std::abs(half);
  const double resabs = absk * std::abs(half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  return {a, b, kronrod * half, err};
}

Rule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& off, double mu0)
{
  const auto n = diag.size();
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) jacobi(i, i) = diag(i);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    jacobi(i, i + 1) = off(i);
    jacobi(i + 1, i) = off(i);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  Rule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    rule.nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace

void QuadratureSpec::validate() const
{
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw ConfigError("quadrature tolerances must be positive");
  if (max_subdivisions < 1) throw ConfigError("max_subdivisions must be at least 1");
}

QuadratureResult integrate_adaptive(const Integrand& f, std::span<const double> breakpoints,
                                    const QuadratureSpec& spec)
{
  if (breakpoints.size() < 2) throw ContractError("integrate_adaptive: need at least two breakpoints");
  std::vector<Panel> panels;
  panels.reserve(breakpoints.size() + static_cast<std::size_t>(spec.max_subdivisions));
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1])) throw ContractError("integrate_adaptive: breakpoints must ascend");
    panels.push_back(gk21(f, breakpoints[i], breakpoints[i + 1]));
  }

  auto totals = [&] {
    double value = 0.0;
    double error = 0.0;
    for (const auto& p : panels) {
      value += p.value;
      error += p.error;
    }
    return std::pair{value, error};
  };

  int splits = 0;
  for (;;) {
    const auto [value, error] = totals();
    if (!std::isfinite(value)) {
      throw ConvergenceError("integrate_adaptive: non-finite integrand", value, error);
    }
    if (error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(value))) {
      return {value, error, static_cast<int>(panels.size())};
    }
    if (splits >= spec.max_subdivisions) {
      std::ostringstream msg;
      msg << "adaptive quadrature did not converge after " << splits << " subdivisions (estimate " << value
          << ", error " << error << ")";
      throw ConvergenceError(msg.str(), value, error);
    }
    auto worst = std::max_element(panels.begin(), panels.end(),
                                  [](const Panel& x, const Panel& y) { return x.error < y.error; });
    const double a = worst->a;
    const double b = worst->b;
    const double mid = 0.5 * (a + b);
    *worst = gk21(f, a, mid);
    panels.push_back(gk21(f, mid, b));
    ++splits;
  }
}

QuadratureResult integrate_adaptive(const Integrand& f, double a, double b, const QuadratureSpec& spec)
{
  const std::array<double, 2> bp{a, b};
  return integrate_adaptive(f, bp, spec);
}

std::vector<double> graded_breakpoints(double length, int depth)
{
  std::vector<double> bp;
  bp.reserve(static_cast<std::size_t>(depth) + 2);
  bp.push_back(0.0);
  for (int n = depth; n >= 1; --n) bp.push_back(length * std::ldexp(1.0, -n));
  bp.push_back(length);
  return bp;
}

double integrate_gauss_legendre_adaptive(const Integrand& f, double a, double b, double tol, int max_depth)
{
  static const Rule rule = gauss_legendre(16);
  auto panel = [&](double lo, double hi) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(c + h * rule.nodes[i]);
    return s * h;
  };
  struct Recurse {
    decltype(panel)& p;
    int max_depth;
    double operator()(double lo, double hi, double whole, double t, int depth) const
    {
      const double mid = 0.5 * (lo + hi);
      const double left = p(lo, mid);
      const double right = p(mid, hi);
      if (std::abs(left + right - whole) <= t || depth >= max_depth) return left + right;
      return (*this)(lo, mid, left, 0.5 * t, depth + 1) + (*this)(mid, hi, right, 0.5 * t, depth + 1);
    }
  };
  return Recurse{panel, max_depth}(a, b, panel(a, b), tol, 0);
}

Rule gauss_legendre(int n)
{
  if (n < 1) throw ContractError("gauss_legendre: need at least one node");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) off(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  Rule rule = golub_welsch(diag, off, 2.0);
  // Polish nodes with Newton steps and take weights from the derivative.
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    double x = rule.nodes[i];
    double dp = 1.0;
    for (int it = 0; it < 3; ++it) {
      const double pn = legendre_eval(n, x);
      const double pn1 = legendre_eval(n - 1, x);
      dp = n * (x * pn - pn1) / (x * x - 1.0);
      x -= pn / dp;
    }
    const double pn1 = legendre_eval(n - 1, x);
    dp = n * (x * legendre_eval(n, x) - pn1) / (x * x - 1.0);
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

Rule gauss_hermite_normal(int n)
{
  if (n < 1) throw ContractError("gauss_hermite_normal: need at least one node");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) off(k - 1) = std::sqrt(static_cast<double>(k));
  Rule rule = golub_welsch(diag, off, 1.0);
  if (n == 1) return rule;
  // He_n' = n He_{n-1}; the weight n! / (n He_{n-1}(x))^2 keeps the small
  // outer weights accurate to full relative precision.
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    double x = rule.nodes[i];
    for (int it = 0; it < 3; ++it) x -= hermite(n, x) / (n * hermite(n - 1, x));
    rule.nodes[i] = x;
    const double h = std::abs(n * hermite(n - 1, x));
    rule.weights[i] = std::exp(log_factorial(n) - 2.0 * std::log(h));
  }
  return rule;
}

Rule gauss_laguerre(int n, double alpha)
{
  if (n < 1) throw ContractError("gauss_laguerre: need at least one node");
  if (!(alpha > -1.0)) throw ContractError("gauss_laguerre: alpha must exceed -1");
  Eigen::VectorXd diag(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) diag(k) = 2.0 * k + alpha + 1.0;
  for (int k = 1; k < n; ++k) off(k - 1) = std::sqrt(k * (k + alpha));
  return golub_welsch(diag, off, std::tgamma(alpha + 1.0));
}

}  // namespace hboltz
