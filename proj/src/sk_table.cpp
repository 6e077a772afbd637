#include "hboltz/sk_table.hpp"

#include "hboltz/errors.hpp"

namespace hboltz {

namespace {

constexpr int kBits = 10;
constexpr std::uint64_t kMask = (1u << kBits) - 1;

SkTable next_degree(const SkTable& cur, const SkTable& prev)
{
  const int k = cur.degree();
  SkTable out(k + 1);
  const double c1 = (2.0 * k + 1.0) / (k + 1.0);
  const double c2 = static_cast<double>(k) / (k + 1.0);
  cur.for_each([&](const MultiIndex& a, const MultiIndex& b, double value) {
    // (v.w) = v1 w1 + v2 w2 + v3 w3
    out.add({a.k1 + 1, a.k2, a.k3}, {b.k1 + 1, b.k2, b.k3}, c1 * value);
    out.add({a.k1, a.k2 + 1, a.k3}, {b.k1, b.k2 + 1, b.k3}, c1 * value);
    out.add({a.k1, a.k2, a.k3 + 1}, {b.k1, b.k2, b.k3 + 1}, c1 * value);
  });
  prev.for_each([&](const MultiIndex& a, const MultiIndex& b, double value) {
    // |v|^2 |w|^2 = sum_{s,t} v_s^2 w_t^2
    for (int s = 0; s < 3; ++s) {
      MultiIndex a2 = a;
      (s == 0 ? a2.k1 : s == 1 ? a2.k2 : a2.k3) += 2;
      for (int t = 0; t < 3; ++t) {
        MultiIndex b2 = b;
        (t == 0 ? b2.k1 : t == 1 ? b2.k2 : b2.k3) += 2;
        out.add(a2, b2, -c2 * value);
      }
    }
  });
  return out;
}

}  // namespace

std::uint64_t SkTable::pack(const MultiIndex& a, const MultiIndex& b)
{
  std::uint64_t key = 0;
  for (int s = 0; s < 3; ++s) key = (key << kBits) | static_cast<std::uint64_t>(a[s]);
  for (int s = 0; s < 3; ++s) key = (key << kBits) | static_cast<std::uint64_t>(b[s]);
  return key;
}

MultiIndex SkTable::unpack_v(std::uint64_t key)
{
  key >>= 3 * kBits;
  return {static_cast<int>((key >> (2 * kBits)) & kMask), static_cast<int>((key >> kBits) & kMask),
          static_cast<int>(key & kMask)};
}

MultiIndex SkTable::unpack_w(std::uint64_t key)
{
  return {static_cast<int>((key >> (2 * kBits)) & kMask), static_cast<int>((key >> kBits) & kMask),
          static_cast<int>(key & kMask)};
}

double SkTable::coefficient(const MultiIndex& a, const MultiIndex& b) const
{
  if (a.degree() != degree_ || b.degree() != degree_) return 0.0;
  const auto it = terms_.find(pack(a, b));
  return it == terms_.end() ? 0.0 : it->second;
}

void SkTable::add(const MultiIndex& a, const MultiIndex& b, double value)
{
  terms_[pack(a, b)] += value;
}

SkTable sk_table(int k)
{
  if (k < 0) throw ContractError("sk_table: negative degree");
  SkTable s0(0);
  s0.add({0, 0, 0}, {0, 0, 0}, 1.0);
  if (k == 0) return s0;
  SkTable s1(1);
  s1.add({1, 0, 0}, {1, 0, 0}, 1.0);
  s1.add({0, 1, 0}, {0, 1, 0}, 1.0);
  s1.add({0, 0, 1}, {0, 0, 1}, 1.0);
  SkTable prev = std::move(s0);
  SkTable cur = std::move(s1);
  for (int d = 1; d < k; ++d) {
    SkTable next = next_degree(cur, prev);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

const SkTable& SkCache::get(int k) const
{
  if (k < 0) throw ContractError("SkCache::get: negative degree");
  std::lock_guard lock(mutex_);
  if (tables_.size() <= static_cast<std::size_t>(k)) tables_.resize(static_cast<std::size_t>(k) + 1);
  auto& slot = tables_[static_cast<std::size_t>(k)];
  if (!slot) {
    // Reuse the two previous degrees when available.
    if (k >= 2 && tables_[k - 1] && tables_[k - 2]) {
      slot = std::make_unique<SkTable>(next_degree(*tables_[k - 1], *tables_[k - 2]));
    } else {
      slot = std::make_unique<SkTable>(sk_table(k));
    }
  }
  return *slot;
}

}  // namespace hboltz
