#include "hboltz/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hboltz/errors.hpp"

namespace hboltz {

namespace {

constexpr std::size_t triangular(std::size_t p) { return p * (p + 1) / 2; }

}  // namespace

std::size_t rank(const MultiIndex& idx)
{
  if (idx.k1 < 0 || idx.k2 < 0 || idx.k3 < 0) {
    throw ContractError("rank: negative multi-index component");
  }
  const int d = idx.degree();
  const auto p = static_cast<std::size_t>(idx.k2 + idx.k3);
  return basis_size(d - 1) + triangular(p) + static_cast<std::size_t>(idx.k3);
}

MultiIndex unrank(std::size_t r, int M)
{
  if (M < 0 || r >= basis_size(M)) {
    throw std::out_of_range("unrank: rank " + std::to_string(r) + " outside I_" + std::to_string(M));
  }
  int d = 0;
  while (basis_size(d) <= r) ++d;
  std::size_t pos = r - basis_size(d - 1);
  std::size_t p = 0;
  while (triangular(p + 1) <= pos) ++p;
  const int k3 = static_cast<int>(pos - triangular(p));
  const int k2 = static_cast<int>(p) - k3;
  return {d - static_cast<int>(p), k2, k3};
}

std::vector<MultiIndex> index_set(int M)
{
  std::vector<MultiIndex> out;
  out.reserve(basis_size(M));
  for (int d = 0; d <= M; ++d) {
    for (int k1 = d; k1 >= 0; --k1) {
      for (int k2 = d - k1; k2 >= 0; --k2) out.push_back({k1, k2, d - k1 - k2});
    }
  }
  return out;
}

double hermite(int n, double x)
{
  if (n < 0) throw ContractError("hermite: negative degree");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int m = 1; m < n; ++m) {
    const double next = x * cur - m * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

void hermite_all(double x, std::span<double> out)
{
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = x;
  for (std::size_t m = 1; m + 1 < out.size(); ++m) {
    out[m + 1] = x * out[m] - static_cast<double>(m) * out[m - 1];
  }
}

double hermite_eval(const MultiIndex& idx, const Vec3& v)
{
  return hermite(idx.k1, v[0]) * hermite(idx.k2, v[1]) * hermite(idx.k3, v[2]);
}

double laguerre_eval(int n, double alpha, double x)
{
  if (n < 0) throw ContractError("laguerre_eval: negative degree");
  if (!(alpha > -1.0)) throw std::domain_error("laguerre_eval: alpha must exceed -1");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + alpha - x;
  for (int m = 1; m < n; ++m) {
    const double next = ((2 * m + 1 + alpha - x) * cur - (m + alpha) * prev) / (m + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

double legendre_eval(int k, double x)
{
  if (k < 0) throw ContractError("legendre_eval: negative degree");
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int n = 1; n < k; ++n) {
    const double next = ((2 * n + 1) * x * cur - n * prev) / (n + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

double legendre_cos_minus_one(int k, double chi)
{
  if (k <= 0) return 0.0;
  const double half = std::sin(0.5 * chi);
  const double s = half * half;
  if (k * (k + 1.0) * s > 0.5) return legendre_eval(k, std::cos(chi)) - 1.0;
  // P_k(x) = sum_j C(k,j) C(k+j,j) ((x-1)/2)^j with (x-1)/2 = -sin^2(chi/2).
  double term = 1.0;
  double sum = 0.0;
  for (int j = 0; j < k; ++j) {
    term *= -s * (k - j) * (k + j + 1.0) / ((j + 1.0) * (j + 1.0));
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

double log_factorial(int n)
{
  if (n < 0) throw ContractError("log_factorial: negative argument");
  return std::lgamma(n + 1.0);
}

double log_odd_double_factorial(int n)
{
  // (2n+1)!! = Gamma(2n+2) / (2^n Gamma(n+1))
  if (n < -1) throw ContractError("log_odd_double_factorial: argument below -1");
  if (n == -1) return 0.0;
  return std::lgamma(2.0 * n + 2.0) - n * std::numbers::ln2 - std::lgamma(n + 1.0);
}

double a_coeff(int i, int j, int ip, int jp)
{
  if (i < 0 || j < 0 || ip < 0 || jp < 0) throw ContractError("a_coeff: negative index");
  if (ip + jp != i + j) throw ContractError("a_coeff: requires i' + j' == i + j");
  const int lo = std::max(0, ip - j);
  const int hi = std::min(ip, i);
  const double base = log_factorial(i) + log_factorial(j);
  double sum = 0.0;
  for (int s = lo; s <= hi; ++s) {
    const double mag = std::exp(base - log_factorial(s) - log_factorial(i - s) - log_factorial(ip - s) -
                                log_factorial(jp - i + s));
    sum += ((jp - i + s) % 2 == 0) ? mag : -mag;
  }
  return std::pow(2.0, -0.5 * (ip + jp)) * sum;
}

double c_coeff(const MultiIndex& k, const MultiIndex& m)
{
  const int kk = k.degree();
  const int mm = m.degree();
  const double log_mag = std::log(4.0 * std::numbers::pi) + log_factorial(mm) - log_odd_double_factorial(kk - mm) +
                         log_factorial(k.k1) + log_factorial(k.k2) + log_factorial(k.k3) - log_factorial(m.k1) -
                         log_factorial(m.k2) - log_factorial(m.k3);
  const double mag = std::exp(log_mag);
  return (mm % 2 == 0) ? mag : -mag;
}

}  // namespace hboltz
