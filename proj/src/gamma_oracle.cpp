// Brute-force quadrature of the defining integral of gamma_j^l.
//
// With B(g, chi) dchi = g^{(eta-5)/(eta-1)} w(y) dy, the inner integral over
// g and n,
//   F(chi) = int dg int dn [H^j(g'/sqrt2) - H^j(g/sqrt2)] H^l(g/sqrt2)
//            g^{(eta-5)/(eta-1)} exp(-g^2/4),
// is an even trigonometric polynomial in chi of degree <= |j| with F(0) = 0.
// Sampling it on a uniform chi grid gives its cosine coefficients c_p, and
// gamma = sum_p c_p int w(y) (cos(p chi(y)) - 1) dy.

#include <cmath>
#include <numbers>

#include "hboltz/collision_tensor.hpp"
#include "hboltz/errors.hpp"

namespace hboltz {

namespace {

constexpr int kMaxOracleDegree = 4;
constexpr int kChiSamples = 16;  // period samples; exact for degree < 8
constexpr int kRadialNodes = 8;
constexpr int kPolarNodes = 12;
constexpr int kAzimuthNodes = 16;
constexpr int kCircleNodes = 16;

Vec3 cross(const Vec3& a, const Vec3& b)
{
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Vec3 normalized(const Vec3& a)
{
  const double n = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  return {a[0] / n, a[1] / n, a[2] / n};
}

}  // namespace

std::vector<double> gamma_direct_oracle_table(int max_degree, const KernelModel& model,
                                              const std::array<Vec3, 3>* frame)
{
  if (max_degree < 0 || max_degree > kMaxOracleDegree) {
    throw ContractError("gamma_direct_oracle: total degrees above 4 are refused (cost guard)");
  }
  const double eta = model.eta();
  const int D = max_degree;
  const auto idx = index_set(D);
  const std::size_t N = idx.size();
  const std::array<Vec3, 3> axes = frame ? *frame : std::array<Vec3, 3>{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};

  const Rule radial = gauss_laguerre(kRadialNodes, (eta - 3.0) / (eta - 1.0));
  const Rule polar = gauss_legendre(kPolarNodes);
  const double radial_pref = 4.0 * std::pow(2.0, (eta - 5.0) / (eta - 1.0));
  const double dphi = 2.0 * std::numbers::pi / kAzimuthNodes;
  const double dpsi = 2.0 * std::numbers::pi / kCircleNodes;
  constexpr int half = kChiSamples / 2;

  // F at chi_q = 2 pi q / kChiSamples, q = 1 .. half (F is even and F(0) = 0).
  std::vector<double> F(static_cast<std::size_t>(half + 1) * N * N, 0.0);
  std::vector<double> hg(3 * (D + 1));
  std::vector<double> hp(3 * (D + 1));
  std::vector<double> Hg(N);
  std::vector<double> diff(N);

  auto fill = [&](const Vec3& u, std::vector<double>& h) {
    for (int s = 0; s < 3; ++s) hermite_all(u[s], std::span<double>(h).subspan(static_cast<std::size_t>(s * (D + 1)), D + 1));
  };
  auto product = [&](const std::vector<double>& h, const MultiIndex& k) {
    return h[k.k1] * h[(D + 1) + k.k2] * h[2 * (D + 1) + k.k3];
  };

  for (std::size_t a = 0; a < radial.nodes.size(); ++a) {
    const double gmag = 2.0 * std::sqrt(radial.nodes[a]);
    for (std::size_t b = 0; b < polar.nodes.size(); ++b) {
      const double ct = polar.nodes[b];
      const double st = std::sqrt(1.0 - ct * ct);
      for (int c = 0; c < kAzimuthNodes; ++c) {
        const double phi = c * dphi;
        Vec3 ghat{};
        for (int s = 0; s < 3; ++s) {
          ghat[s] = st * std::cos(phi) * axes[0][s] + st * std::sin(phi) * axes[1][s] + ct * axes[2][s];
        }
        const Vec3 ref = std::abs(ghat[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
        const Vec3 e1 = normalized(cross(ghat, ref));
        const Vec3 e2 = cross(ghat, e1);
        const double w = radial_pref * radial.weights[a] * polar.weights[b] * dphi * dpsi;

        const Vec3 u{gmag * ghat[0] / std::numbers::sqrt2, gmag * ghat[1] / std::numbers::sqrt2,
                     gmag * ghat[2] / std::numbers::sqrt2};
        fill(u, hg);
        for (std::size_t r = 0; r < N; ++r) Hg[r] = product(hg, idx[r]);

        for (int q = 1; q <= half; ++q) {
          const double chi = 2.0 * std::numbers::pi * q / kChiSamples;
          const double cc = std::cos(chi);
          const double sc = std::sin(chi);
          double* Fq = &F[static_cast<std::size_t>(q) * N * N];
          for (int p = 0; p < kCircleNodes; ++p) {
            const double psi = p * dpsi;
            Vec3 up{};
            for (int s = 0; s < 3; ++s) {
              const double n_s = std::cos(psi) * e1[s] + std::sin(psi) * e2[s];
              up[s] = u[s] * cc - gmag / std::numbers::sqrt2 * n_s * sc;
            }
            fill(up, hp);
            for (std::size_t r = 0; r < N; ++r) diff[r] = w * (product(hp, idx[r]) - Hg[r]);
            for (std::size_t r = 0; r < N; ++r) {
              if (diff[r] == 0.0) continue;
              double* row = Fq + r * N;
              for (std::size_t l = 0; l < N; ++l) row[l] += diff[r] * Hg[l];
            }
          }
        }
      }
    }
  }

  // J_p = int w(y) (cos(p chi) - 1) dy for p = 1 .. half - 1.
  std::vector<double> J(half, 0.0);
  const auto bp = graded_breakpoints(1.0, 40);
  for (int p = 1; p < half; ++p) {
    J[p] = integrate_adaptive(
               [&](double y) {
                 const double s = std::sin(0.5 * p * model.chi(y));
                 return -2.0 * s * s * kernel_y_weight(eta, y);
               },
               bp, model.quadrature())
               .value *
           kernel_prefactor(eta);
  }

  std::vector<double> out(N * N, 0.0);
  for (std::size_t e = 0; e < N * N; ++e) {
    double gamma = 0.0;
    for (int p = 1; p < half; ++p) {
      // Cosine coefficient from the even extension: F_0 = 0, F_{16-q} = F_q.
      double cp = F[static_cast<std::size_t>(half) * N * N + e] * std::cos(p * std::numbers::pi);
      for (int q = 1; q < half; ++q) cp += 2.0 * F[static_cast<std::size_t>(q) * N * N + e] * std::cos(p * q * std::numbers::pi / half);
      cp *= 2.0 / kChiSamples;
      gamma += cp * J[p];
    }
    out[e] = gamma;
  }
  return out;
}

double gamma_direct_oracle(const MultiIndex& j, const MultiIndex& l, const KernelModel& model)
{
  const int D = std::max(j.degree(), l.degree());
  if (D > kMaxOracleDegree) throw ContractError("gamma_direct_oracle: total degrees above 4 are refused (cost guard)");
  const auto table = gamma_direct_oracle_table(D, model);
  return table[rank(j) * basis_size(D) + rank(l)];
}

}  // namespace hboltz
