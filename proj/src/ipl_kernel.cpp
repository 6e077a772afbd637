#include "hboltz/ipl_kernel.hpp"

#include <array>
#include <cmath>
#include <deque>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>

#include "hboltz/basis.hpp"
#include "hboltz/errors.hpp"

namespace hboltz {

namespace {

constexpr int kGradingDepth = 40;

void check_eta(double eta)
{
  if (!(eta > 3.0)) throw std::domain_error("IPL exponent eta must exceed 3");
}

// chi(y) = 2 int_0^1 [1/sqrt(1-x^2) - sqrt(1-y)/sqrt(D(x))] dx with
// D(x) = (1-y)(1-x^2) + y(1-x^{eta-1}). The bracket is rewritten as
// y(1-x^{eta-1}) / (sqrt(1-x^2) sqrt(D) (sqrt(D) + sqrt((1-y)(1-x^2)))),
// which is proportional to y and free of cancellation.
double chi_impl(double eta, double y)
{
  const double one_minus_y = 1.0 - y;
  const double tol = 1e-15 * y;

  auto outer = [&](double x) {
    const double q = 1.0 - x * x;
    const double e = 1.0 - std::pow(x, eta - 1.0);
    const double d = one_minus_y * q + y * e;
    const double sd = std::sqrt(d);
    return y * e / (std::sqrt(q) * sd * (sd + std::sqrt(one_minus_y * q)));
  };
  // Near x = 1 substitute x = 1 - u^2 to absorb the inverse square root.
  auto inner = [&](double u) {
    const double u2 = u * u;
    const double e = -std::expm1((eta - 1.0) * std::log1p(-u2)) / u2;
    const double p = 2.0 - u2;
    const double d = one_minus_y * p + y * e;
    const double sd = std::sqrt(d);
    return 2.0 * y * e / (std::sqrt(p) * sd * (sd + std::sqrt(one_minus_y * p)));
  };

  const double part1 = integrate_gauss_legendre_adaptive(outer, 0.0, 0.5, tol);
  const double part2 = integrate_gauss_legendre_adaptive(inner, 0.0, std::numbers::sqrt2 / 2.0, tol);
  return 2.0 * (part1 + part2);
}

}  // namespace

double chi_of_y(double eta, double y)
{
  check_eta(eta);
  if (!(y > 0.0) || y > 1.0) throw std::domain_error("chi_of_y: y must lie in (0, 1]");
  return chi_impl(eta, y);
}

double kernel_y_weight(double eta, double y)
{
  return (2.0 * (1.0 - y) + (eta - 1.0) * y) * std::pow((eta - 1.0) * y, -(eta + 1.0) / (eta - 1.0));
}

double kernel_prefactor(double eta) { return std::pow(2.0, -(eta - 3.0) / (eta - 1.0)); }

struct KernelModel::State {
  struct Slot {
    std::once_flag once;
    QuadratureResult result;
  };

  std::shared_mutex chi_mutex;
  std::unordered_map<double, double> chi_cache;

  std::mutex slots_mutex;
  std::deque<Slot> slots;

  Slot& slot(int k)
  {
    std::lock_guard lock(slots_mutex);
    while (slots.size() <= static_cast<std::size_t>(k)) slots.emplace_back();
    return slots[static_cast<std::size_t>(k)];
  }
};

KernelModel::KernelModel(double eta, QuadratureSpec quad)
    : eta_(eta), quad_(quad), state_(std::make_shared<State>())
{
  check_eta(eta);
  quad_.validate();
}

double KernelModel::chi(double y) const
{
  {
    std::shared_lock lock(state_->chi_mutex);
    const auto it = state_->chi_cache.find(y);
    if (it != state_->chi_cache.end()) return it->second;
  }
  const double value = chi_of_y(eta_, y);
  std::unique_lock lock(state_->chi_mutex);
  state_->chi_cache.emplace(y, value);
  return value;
}

QuadratureResult KernelModel::i_integral_result(int k) const
{
  if (k < 0) throw ContractError("i_integral: negative degree");
  QuadratureResult out;
  for (int kk = 0; kk <= k; ++kk) {
    auto& slot = state_->slot(kk);
    std::call_once(slot.once, [&] {
      if (kk == 0) {
        slot.result = {0.0, 0.0, 0};
        return;
      }
      const auto bp = graded_breakpoints(1.0, kGradingDepth);
      slot.result = integrate_adaptive(
          [&](double y) { return legendre_cos_minus_one(kk, chi(y)) * kernel_y_weight(eta_, y); }, bp, quad_);
    });
    out = slot.result;
  }
  return out;
}

int KernelModel::cached_degrees() const
{
  std::lock_guard lock(state_->slots_mutex);
  return static_cast<int>(state_->slots.size());
}

double i_integral(int k, double eta, const QuadratureSpec& quad) { return KernelModel(eta, quad).i_integral(k); }

double generalized_binomial(double x, int r)
{
  if (r < 0) return 0.0;
  double out = 1.0;
  for (int t = 0; t < r; ++t) out *= (x - t) / (t + 1.0);
  return out;
}

double laguerre_product_moment(int m, int n, double alpha, double mu)
{
  if (m < 0 || n < 0) throw ContractError("laguerre_product_moment: negative degree");
  if (!(mu > -1.0)) throw ContractError("laguerre_product_moment: mu must exceed -1");
  const double diff = mu - alpha;
  double sum = 0.0;
  for (int i = 0; i <= std::min(m, n); ++i) {
    sum += generalized_binomial(diff, m - i) * generalized_binomial(diff, n - i) * generalized_binomial(i + mu, i);
  }
  const double sign = ((m + n) % 2 == 0) ? 1.0 : -1.0;
  return sign * std::tgamma(mu + 1.0) * sum;
}

double k_coeff(int k, int l, int m, int n, const KernelModel& model)
{
  if (m < 0 || n < 0 || 2 * m > k || 2 * n > l) {
    throw ContractError("k_coeff: requires 0 <= 2m <= k and 0 <= 2n <= l");
  }
  const int r = k - 2 * m;
  if (r != l - 2 * n) return 0.0;
  if (r == 0) return 0.0;  // I(0, eta) = 0
  const double eta = model.eta();
  if (model.is_maxwell()) {
    if (m != n) return 0.0;
    return std::pow(2.0, r + 0.5) * model.i_integral(r) * generalized_binomial(k - m + 0.5, m) *
           std::tgamma(r + 1.5);
  }
  const double c = (eta - 3.0) / (eta - 1.0) + r;
  return std::pow(2.0, c) * model.i_integral(r) * laguerre_product_moment(m, n, r + 0.5, c);
}

double a2_integral(const KernelModel& model) { return -2.0 / 3.0 * model.b_tilde(2); }

double bgk_tau(const KernelModel& model)
{
  const double eta = model.eta();
  const double a2 = a2_integral(model);
  return 5.0 / (std::pow(2.0, (3.0 * eta - 7.0) / (eta - 1.0)) * std::sqrt(std::numbers::pi) * a2 *
                std::tgamma(4.0 - 2.0 / (eta - 1.0)));
}

double scaled_time_constant(const KernelModel& model, const KernelModel& maxwell)
{
  if (!maxwell.is_maxwell()) throw ContractError("scaled_time_constant: reference model must have eta = 5");
  const double eta = model.eta();
  if (model.is_maxwell()) return 1.0;
  return std::pow(4.0, 2.0 / (eta - 1.0) - 0.5) * maxwell.b_tilde(2) * std::tgamma(3.5) /
         (model.b_tilde(2) * std::tgamma(4.0 - 2.0 / (eta - 1.0)));
}

double scaled_time_constant(const KernelModel& model)
{
  return scaled_time_constant(model, KernelModel(5.0, model.quadrature()));
}

}  // namespace hboltz
