#include "hboltz/solver.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hboltz/collision_tensor.hpp"
#include "hboltz/errors.hpp"

namespace hboltz {

SpectralState SpectralState::maxwellian(int M_)
{
  SpectralState s(M_);
  s.coeffs[0] = 1.0;
  return s;
}

double SpectralState::operator[](const MultiIndex& k) const
{
  if (k.degree() > M) return 0.0;
  return coeffs[rank(k)];
}

double& SpectralState::at(const MultiIndex& k)
{
  if (k.degree() > M) throw std::out_of_range("SpectralState::at: index outside I_M");
  return coeffs[rank(k)];
}

SpectralState SpectralState::resized(int M_) const
{
  SpectralState out(M_);
  const std::size_t n = std::min(out.coeffs.size(), coeffs.size());
  std::copy_n(coeffs.begin(), n, out.coeffs.begin());
  return out;
}

Moments moments(const SpectralState& s)
{
  Moments m;
  m.rho = s[{0, 0, 0}];
  const std::array<MultiIndex, 3> e{MultiIndex{1, 0, 0}, MultiIndex{0, 1, 0}, MultiIndex{0, 0, 1}};
  for (int a = 0; a < 3; ++a) m.u[a] = s[e[a]] / m.rho;
  const double u2 = m.u[0] * m.u[0] + m.u[1] * m.u[1] + m.u[2] * m.u[2];

  // Raw second moments: int v_a v_b f = f_{e_a + e_b} (a != b), 2 f_{2e_a} + rho.
  std::array<Vec3, 3> P{};
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      MultiIndex k{};
      k.k1 = (a == 0) + (b == 0);
      k.k2 = (a == 1) + (b == 1);
      k.k3 = (a == 2) + (b == 2);
      P[a][b] = a == b ? 2.0 * s[k] + m.rho : s[k];
    }
  }
  m.theta = (P[0][0] + P[1][1] + P[2][2] - m.rho * u2) / (3.0 * m.rho);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) m.sigma[a][b] = P[a][b] - m.rho * m.u[a] * m.u[b] - (a == b ? m.rho * m.theta : 0.0);

  m.has_heat_flux = s.M >= 3;
  if (m.has_heat_flux) {
    m.q[0] = 3.0 * s[{3, 0, 0}] + s[{1, 2, 0}] + s[{1, 0, 2}];
    m.q[1] = 3.0 * s[{0, 3, 0}] + s[{2, 1, 0}] + s[{0, 1, 2}];
    m.q[2] = 3.0 * s[{0, 0, 3}] + s[{2, 0, 1}] + s[{0, 2, 1}];
  }
  return m;
}

int rk4_step_count(double dt, double t_end)
{
  if (!(dt > 0.0)) throw ContractError("rk4: dt must be positive");
  if (!(t_end >= 0.0)) throw ContractError("rk4: t_end must be nonnegative");
  return static_cast<int>(std::ceil(t_end / dt - 1e-9));
}

void rk4_integrate(const RhsFunction& rhs, SpectralState& state, double dt, double t_end, const Observer& observer)
{
  const int steps = rk4_step_count(dt, t_end);
  const std::size_t n = state.coeffs.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  auto& f = state.coeffs;

  if (observer) observer(0, 0.0, state);
  double t = 0.0;
  for (int step = 1; step <= steps; ++step) {
    const double t_next = step == steps ? t_end : step * dt;
    const double h = t_next - t;
    rhs(f, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = f[i] + 0.5 * h * k1[i];
    rhs(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = f[i] + 0.5 * h * k2[i];
    rhs(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = f[i] + h * k3[i];
    rhs(tmp, k4);
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      tmp[i] = f[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      finite = finite && std::isfinite(tmp[i]);
    }
    if (!finite) {
      std::ostringstream msg;
      msg << "state became non-finite during the step ending at t = " << t_next << "; last finite state at t = " << t;
      throw NumericalError(msg.str(), t);
    }
    f.swap(tmp);
    t = t_next;
    if (observer) observer(step, t, state);
  }
}

// ---------------------------------------------------------------- BKW

BkwReference BkwReference::from_kernel(const KernelModel& maxwell)
{
  if (!maxwell.is_maxwell()) throw ContractError("BKW reference needs the eta = 5 kernel");
  const double i2 = maxwell.i_integral(2);
  if (!(i2 < 0.0)) throw NumericalError("I(2, 5) is not negative; the BKW reference is undefined", 0.0);
  const double b2 = maxwell.b_tilde(2);
  const double t0 = -0.92 / (std::numbers::pi / 3.0 * b2);
  return {b2, t0};
}

BkwReference::BkwReference(double b2_, double t0_) : b2(b2_), t0(t0_)
{
  if (!(b2 < 0.0)) throw std::domain_error("BKW: b2 must be negative");
  // Small slack so that the canonical choice 0.92 > log 2.5 is accepted.
  if (-(std::numbers::pi / 3.0) * b2 * t0 < std::log(2.5) - 1e-12) {
    throw std::domain_error("BKW: -(pi/3) b2 t0 must be at least log(5/2) for a positive solution");
  }
}

double BkwReference::decay(double t) const { return std::exp(std::numbers::pi / 3.0 * b2 * (t + t0)); }

SpectralState bkw_coeffs(double t, const BkwReference& ref, int M)
{
  const double E = ref.decay(t);
  SpectralState s(M);
  const auto idx = index_set(M);
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const auto& k = idx[r];
    if (!k.all_even()) continue;
    const int h = k.degree() / 2;
    const double lf = log_factorial(k.k1 / 2) + log_factorial(k.k2 / 2) + log_factorial(k.k3 / 2);
    s.coeffs[r] = std::pow(-0.5 * E, h) * (1.0 - h) * std::exp(-lf);
  }
  return s;
}

double bkw_marginal(double t, const BkwReference& ref, double v1)
{
  const double tau = ref.tau(t);
  const double g = std::exp(-v1 * v1 / (2.0 * tau)) / std::sqrt(2.0 * std::numbers::pi * tau);
  return g * (1.0 + (1.0 - tau) / tau * (v1 * v1 / (2.0 * tau) - 0.5));
}

// ---------------------------------------------------------------- initial data

std::vector<double> gaussian_hermite_coeffs(double c, double s2, int n)
{
  // E[He_m(c + s Z)] / m! = sum_j c^{m-2j} ((s2 - 1)/2)^j / ((m-2j)! j!)
  std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
  const double h = 0.5 * (s2 - 1.0);
  for (int m = 0; m <= n; ++m) {
    double sum = 0.0;
    for (int j = 0; 2 * j <= m; ++j) {
      sum += std::pow(c, m - 2 * j) * std::pow(h, j) * std::exp(-log_factorial(m - 2 * j) - log_factorial(j));
    }
    out[static_cast<std::size_t>(m)] = sum;
  }
  return out;
}

namespace {

// Same coefficients by Gauss-Hermite quadrature of E[He_m(c + s Z)] / m!.
std::vector<double> gaussian_hermite_coeffs_quadrature(double c, double s2, int n)
{
  const Rule rule = gauss_hermite_normal(2 * n + 2);
  std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> h(static_cast<std::size_t>(n) + 1);
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    hermite_all(c + std::sqrt(s2) * rule.nodes[q], h);
    for (int m = 0; m <= n; ++m) out[static_cast<std::size_t>(m)] += rule.weights[q] * h[static_cast<std::size_t>(m)];
  }
  for (int m = 0; m <= n; ++m) out[static_cast<std::size_t>(m)] *= std::exp(-log_factorial(m));
  return out;
}

SpectralState tensor_state(int M, const std::vector<double>& g1, const std::vector<double>& g2,
                           const std::vector<double>& g3)
{
  SpectralState s(M);
  const auto idx = index_set(M);
  for (std::size_t r = 0; r < idx.size(); ++r) s.coeffs[r] = g1[idx[r].k1] * g2[idx[r].k2] * g3[idx[r].k3];
  return s;
}

}  // namespace

SpectralState project_bigaussian(int M)
{
  if (M < 0) throw ContractError("project_bigaussian: negative M");
  const double a = std::sqrt(1.5);
  auto left = gaussian_hermite_coeffs(-a, 0.5, M);
  auto right = gaussian_hermite_coeffs(a, 0.5, M);
  const auto centre = gaussian_hermite_coeffs(0.0, 0.5, M);
  const auto left_q = gaussian_hermite_coeffs_quadrature(-a, 0.5, M);
  const auto right_q = gaussian_hermite_coeffs_quadrature(a, 0.5, M);
  const auto centre_q = gaussian_hermite_coeffs_quadrature(0.0, 0.5, M);

  std::vector<double> mix(static_cast<std::size_t>(M) + 1);
  for (std::size_t m = 0; m < mix.size(); ++m) {
    const double closed = 0.5 * (left[m] + right[m]);
    const double quad = 0.5 * (left_q[m] + right_q[m]);
    if (std::abs(closed - quad) > 1e-10 || std::abs(centre[m] - centre_q[m]) > 1e-10) {
      throw NumericalError("bi-Gaussian projection: closed form and quadrature disagree at degree " +
                               std::to_string(m),
                           0.0);
    }
    mix[m] = m % 2 == 0 ? closed : 0.0;
  }
  return tensor_state(M, mix, centre, centre);
}

SpectralState project_discontinuous(int M, const QuadratureSpec& quad)
{
  if (M < 0) throw ContractError("project_discontinuous: negative M");
  const double A = std::pow(2.0, 0.25) * (2.0 - std::numbers::sqrt2) / std::pow(std::numbers::pi, 1.5);
  const double s2_right = 1.0 / std::numbers::sqrt2;  // variance for v1 > 0
  const double s2_left = std::numbers::sqrt2;         // variance for v1 < 0

  // int_0^inf He_n(x)/sqrt(n!) exp(-x^2 / (2 s2)) dx. The orthonormal
  // scaling keeps abs_tol meaningful at high degree, where the raw He_n
  // integral is of order n! f_n.
  std::vector<double> bp;
  for (int b = 0; b <= 40; ++b) bp.push_back(b);
  auto half_line = [&](double s2, int n) {
    auto f = [&](double x) {
      double prev = 0.0, cur = 1.0;
      for (int j = 0; j < n; ++j) {
        const double next = (x * cur - std::sqrt(static_cast<double>(j)) * prev) / std::sqrt(j + 1.0);
        prev = cur;
        cur = next;
      }
      return cur * std::exp(-x * x / (2.0 * s2));
    };
    return integrate_adaptive(f, bp, quad).value;
  };

  std::vector<double> right(static_cast<std::size_t>(M) + 1), left(static_cast<std::size_t>(M) + 1);
  for (int n = 0; n <= M; ++n) {
    const double inv_sqrt_fact = std::exp(-0.5 * log_factorial(n));
    right[static_cast<std::size_t>(n)] = half_line(s2_right, n) * inv_sqrt_fact;
    left[static_cast<std::size_t>(n)] = (n % 2 == 0 ? 1.0 : -1.0) * half_line(s2_left, n) * inv_sqrt_fact;
  }
  // v2 and v3 factors: exp(-x^2/(2 s2)) = sqrt(2 pi s2) N(0, s2).
  const auto gr = gaussian_hermite_coeffs(0.0, s2_right, M);
  const auto gl = gaussian_hermite_coeffs(0.0, s2_left, M);
  const double wr = A * 2.0 * std::numbers::pi * s2_right;
  const double wl = 0.25 * A * 2.0 * std::numbers::pi * s2_left;

  SpectralState s(M);
  const auto idx = index_set(M);
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const auto& k = idx[r];
    s.coeffs[r] = wr * right[k.k1] * gr[k.k2] * gr[k.k3] + wl * left[k.k1] * gl[k.k2] * gl[k.k3];
  }
  return s;
}

// ---------------------------------------------------------------- marginals and CSV

std::vector<double> marginal_1d(const SpectralState& state, std::span<const double> v1)
{
  std::vector<double> out(v1.size());
  std::vector<double> h(static_cast<std::size_t>(state.M) + 1);
  for (std::size_t p = 0; p < v1.size(); ++p) {
    hermite_all(v1[p], h);
    double sum = 0.0;
    for (int k = 0; k <= state.M; ++k) sum += state[{k, 0, 0}] * h[static_cast<std::size_t>(k)];
    out[p] = sum * std::exp(-0.5 * v1[p] * v1[p]) / std::sqrt(2.0 * std::numbers::pi);
  }
  return out;
}

std::vector<double> marginal_2d(const SpectralState& state, std::span<const double> v1, std::span<const double> v2)
{
  const auto M = static_cast<std::size_t>(state.M);
  std::vector<double> out(v1.size() * v2.size());
  std::vector<double> h1(M + 1), h2(M + 1);
  for (std::size_t p = 0; p < v1.size(); ++p) {
    hermite_all(v1[p], h1);
    for (std::size_t q = 0; q < v2.size(); ++q) {
      hermite_all(v2[q], h2);
      double sum = 0.0;
      for (int a = 0; a <= state.M; ++a)
        for (int b = 0; a + b <= state.M; ++b) sum += state[{a, b, 0}] * h1[a] * h2[b];
      out[p * v2.size() + q] =
          sum * std::exp(-0.5 * (v1[p] * v1[p] + v2[q] * v2[q])) / (2.0 * std::numbers::pi);
    }
  }
  return out;
}

std::vector<std::string> trajectory_columns(bool with_scaled_time)
{
  std::vector<std::string> cols{"t",       "rho",     "u1",      "u2",      "u3",      "theta",
                                "sigma11", "sigma12", "sigma13", "sigma22", "sigma23", "sigma33",
                                "q1",      "q2",      "q3",      "f400",    "f220"};
  if (with_scaled_time) cols.push_back("t_scaled");
  return cols;
}

std::string trajectory_row(double t, const SpectralState& state, double time_scale)
{
  const Moments m = moments(state);
  const double values[] = {t,
                           m.rho,
                           m.u[0],
                           m.u[1],
                           m.u[2],
                           m.theta,
                           m.sigma[0][0],
                           m.sigma[0][1],
                           m.sigma[0][2],
                           m.sigma[1][1],
                           m.sigma[1][2],
                           m.sigma[2][2],
                           m.q[0],
                           m.q[1],
                           m.q[2],
                           state[{4, 0, 0}],
                           state[{2, 2, 0}]};
  std::string row;
  for (std::size_t c = 0; c < std::size(values); ++c) {
    if (c) row += ',';
    row += format_real(values[c]);
  }
  if (time_scale > 0.0) row += ',' + format_real(t / time_scale);
  return row;
}

}  // namespace hboltz
