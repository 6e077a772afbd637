#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "hboltz/basis.hpp"

namespace hboltz {

/// Monomial coefficients of S_k(v, w) = (|v||w|)^k P_k(v.w / |v||w|).
///
/// Every monomial v^a w^b of S_k has |a| == |b| == k, and the table is
/// symmetric under exchanging a and b.
class SkTable {
 public:
  SkTable() = default;
  explicit SkTable(int degree) : degree_(degree) {}

  int degree() const noexcept { return degree_; }

  /// Coefficient of v^a w^b; zero when the monomial is absent.
  double coefficient(const MultiIndex& a, const MultiIndex& b) const;

  void add(const MultiIndex& a, const MultiIndex& b, double value);

  std::size_t size() const noexcept { return terms_.size(); }

  template <class F>
  void for_each(F&& f) const
  {
    for (const auto& [key, value] : terms_) f(unpack_v(key), unpack_w(key), value);
  }

  static std::uint64_t pack(const MultiIndex& a, const MultiIndex& b);

 private:
  static MultiIndex unpack_v(std::uint64_t key);
  static MultiIndex unpack_w(std::uint64_t key);

  int degree_ = 0;
  std::unordered_map<std::uint64_t, double> terms_;
};

/// Builds S_k by the three-term recursion
/// S_{k+1} = (2k+1)/(k+1) (v.w) S_k - k/(k+1) |v|^2 |w|^2 S_{k-1}.
SkTable sk_table(int k);

/// Memoized S_k tables; each degree is built once, then shared read-only.
class SkCache {
 public:
  const SkTable& get(int k) const;

 private:
  mutable std::mutex mutex_;
  mutable std::vector<std::unique_ptr<SkTable>> tables_;
};

}  // namespace hboltz
