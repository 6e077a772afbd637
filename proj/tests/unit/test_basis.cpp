#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "hboltz/basis.hpp"
#include "hboltz/errors.hpp"
#include "hboltz/quadrature.hpp"
#include "hboltz/sk_table.hpp"
#include "oracles.hpp"

using namespace hboltz;

TEST_CASE("basis_size matches a brute-force count")
{
  CHECK(basis_size(0) == 1);
  CHECK(basis_size(1) == 4);
  CHECK(basis_size(2) == 10);
  CHECK(basis_size(20) == 1771);
  for (int M = 0; M <= 40; ++M) {
    std::size_t count = 0;
    for (int a = 0; a <= M; ++a)
      for (int b = 0; a + b <= M; ++b)
        for (int c = 0; a + b + c <= M; ++c) ++count;
    CHECK(basis_size(M) == count);
  }
}

TEST_CASE("rank order is degree-major with k1 then k2 descending")
{
  const std::vector<MultiIndex> expected{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {2, 0, 0},
                                         {1, 1, 0}, {1, 0, 1}, {0, 2, 0}, {0, 1, 1}, {0, 0, 2}};
  const auto got = index_set(2);
  REQUIRE(got.size() == expected.size());
  for (std::size_t r = 0; r < expected.size(); ++r) CHECK(got[r] == expected[r]);
}

TEST_CASE("rank and unrank are inverse and I_M is a prefix")
{
  const int M = 12;
  const auto all = index_set(M);
  std::set<std::tuple<int, int, int>> seen;
  for (std::size_t r = 0; r < all.size(); ++r) {
    CHECK(rank(all[r]) == r);
    CHECK(unrank(r, M) == all[r]);
    seen.insert({all[r].k1, all[r].k2, all[r].k3});
    if (r > 0) CHECK(all[r - 1].degree() <= all[r].degree());
  }
  CHECK(seen.size() == all.size());
  for (int m = 0; m <= M; ++m) {
    const auto small = index_set(m);
    for (std::size_t r = 0; r < small.size(); ++r) CHECK(small[r] == all[r]);
  }
  CHECK_THROWS_AS(unrank(basis_size(M), M), std::out_of_range);
}

TEST_CASE("Hermite polynomials agree with symbolic differentiation")
{
  std::vector<double> all(13);
  for (double x : {-3.7, -1.0, -0.2, 0.0, 0.4, 1.5, 2.9}) {
    hermite_all(x, all);
    for (int n = 0; n <= 12; ++n) {
      const double ref = oracle::hermite(n, x);
      CHECK(hermite(n, x) == doctest::Approx(ref).epsilon(1e-12).scale(1.0));
      CHECK(all[n] == doctest::Approx(ref).epsilon(1e-12).scale(1.0));
    }
  }
  const Vec3 v{0.3, -1.2, 2.0};
  CHECK(hermite_eval({2, 3, 1}, v) ==
        doctest::Approx(oracle::hermite(2, 0.3) * oracle::hermite(3, -1.2) * oracle::hermite(1, 2.0)));
}

TEST_CASE("Hermite orthogonality under the normal weight")
{
  const Rule gh = gauss_hermite_normal(20);
  for (int m = 0; m <= 12; ++m) {
    for (int n = 0; n <= 12; ++n) {
      double s = 0.0;
      for (std::size_t q = 0; q < gh.nodes.size(); ++q) s += gh.weights[q] * hermite(m, gh.nodes[q]) * hermite(n, gh.nodes[q]);
      const double expect = m == n ? std::tgamma(n + 1.0) : 0.0;
      CHECK(s == doctest::Approx(expect).epsilon(1e-11).scale(std::tgamma(std::max(m, n) + 1.0)));
    }
  }
}

TEST_CASE("Laguerre and Legendre agree with their Rodrigues forms")
{
  for (double alpha : {-0.5, 0.0, 0.5, 1.5, 3.25}) {
    for (int n = 0; n <= 8; ++n) {
      for (double x : {0.0, 0.3, 1.7, 4.0, 9.5}) {
        const double ref = oracle::laguerre(n, alpha, x);
        CHECK(laguerre_eval(n, alpha, x) == doctest::Approx(ref).epsilon(1e-11).scale(1.0));
      }
    }
  }
  for (int k = 0; k <= 12; ++k) {
    for (double x : {-1.0, -0.6, 0.0, 0.25, 0.9, 1.0}) {
      CHECK(legendre_eval(k, x) == doctest::Approx(oracle::legendre(k, x)).epsilon(1e-11).scale(1.0));
    }
  }
}

TEST_CASE("P_k(cos chi) - 1 keeps precision at small angles")
{
  for (int k = 0; k <= 12; ++k) {
    for (double chi : {0.4, 1.3, 2.8}) {
      CHECK(legendre_cos_minus_one(k, chi) == doctest::Approx(legendre_eval(k, std::cos(chi)) - 1.0).epsilon(1e-12).scale(1.0));
    }
    // Leading small-angle term: -k(k+1)/4 chi^2.
    const double chi = 1e-6;
    const double lead = -0.25 * k * (k + 1) * chi * chi;
    if (k == 0) {
      CHECK(legendre_cos_minus_one(k, chi) == 0.0);
    } else {
      CHECK(legendre_cos_minus_one(k, chi) == doctest::Approx(lead).epsilon(1e-8));
    }
  }
}

TEST_CASE("log factorials")
{
  CHECK(log_factorial(0) == 0.0);
  CHECK(log_factorial(10) == doctest::Approx(std::log(3628800.0)));
  CHECK(log_odd_double_factorial(-1) == 0.0);
  CHECK(log_odd_double_factorial(0) == doctest::Approx(0.0));
  CHECK(log_odd_double_factorial(3) == doctest::Approx(std::log(105.0)));  // 7!!
}

TEST_CASE("Hermite splitting identity holds pointwise")
{
  auto gen = oracle::rng(20261016);
  std::uniform_real_distribution<double> dist(-2.5, 2.5);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double h = dist(gen);
    const double g = dist(gen);
    for (int i = 0; i <= 6; ++i) {
      for (int j = 0; i + j <= 6; ++j) {
        const double lhs = oracle::hermite(i, h + g / 2) * oracle::hermite(j, h - g / 2);
        double rhs = 0.0;
        for (int ip = 0; ip <= i + j; ++ip) {
          const int jp = i + j - ip;
          rhs += a_coeff(i, j, ip, jp) * oracle::hermite(ip, std::sqrt(2.0) * h) * oracle::hermite(jp, g / std::sqrt(2.0));
        }
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
      }
    }
  }
  CHECK(worst <= 1e-9);
  CHECK_THROWS_AS(a_coeff(1, 1, 1, 2), ContractError);
}

TEST_CASE("c coefficients")
{
  // C_0^k = 4 pi / (2|k|+1)!!
  CHECK(c_coeff({0, 0, 0}, {0, 0, 0}) == doctest::Approx(4.0 * std::numbers::pi));
  CHECK(c_coeff({1, 0, 0}, {0, 0, 0}) == doctest::Approx(4.0 * std::numbers::pi / 3.0));
  // m = k: (-1)^|k| 4 pi |k|!
  CHECK(c_coeff({1, 1, 0}, {1, 1, 0}) == doctest::Approx(4.0 * std::numbers::pi * 2.0));
  CHECK(c_coeff({2, 0, 1}, {1, 0, 0}) == doctest::Approx(-4.0 * std::numbers::pi * 2.0 / 15.0));
}

TEST_CASE("S_k tables reproduce the Legendre form and are symmetric")
{
  auto gen = oracle::rng(7);
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  for (int k = 0; k <= 8; ++k) {
    const SkTable t = sk_table(k);
    CHECK(t.degree() == k);
    t.for_each([&](const MultiIndex& a, const MultiIndex& b, double c) {
      CHECK(a.degree() == k);
      CHECK(b.degree() == k);
      CHECK(t.coefficient(b, a) == doctest::Approx(c).epsilon(1e-13));
    });
    for (int trial = 0; trial < 5; ++trial) {
      const Vec3 v{dist(gen), dist(gen), dist(gen)};
      const Vec3 w{dist(gen), dist(gen), dist(gen)};
      const double nv = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
      const double nw = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
      const double cosang = (v[0] * w[0] + v[1] * w[1] + v[2] * w[2]) / (nv * nw);
      const double ref = std::pow(nv * nw, k) * oracle::legendre(k, cosang);
      double sum = 0.0;
      t.for_each([&](const MultiIndex& a, const MultiIndex& b, double c) {
        double term = c;
        for (int s = 0; s < 3; ++s) term *= std::pow(v[s], a[s]) * std::pow(w[s], b[s]);
        sum += term;
      });
      CHECK(sum == doctest::Approx(ref).epsilon(1e-11).scale(std::pow(nv * nw, k)));
    }
  }
  SkCache cache;
  CHECK(&cache.get(5) == &cache.get(5));
  CHECK(cache.get(3).size() == sk_table(3).size());
}
