#pragma once

// Galerkin collision tensor A_k^{i,j}: gamma coefficients, assembly,
// symmetrization and the on-disk cache format.

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "hboltz/basis.hpp"
#include "hboltz/ipl_kernel.hpp"
#include "hboltz/sk_table.hpp"

namespace hboltz {

/// Dense table of K_{mn}^{kl} for k <= kmax, l <= lmax.
class KTable {
 public:
  KTable(int kmax, int lmax, const KernelModel& model);
  /// Zero when k - 2m != l - 2n.
  double operator()(int k, int l, int m, int n) const;

 private:
  int kmax_;
  int lmax_;
  std::vector<double> values_;  // indexed by (k, l, m); n is implied
};

/// gamma_j^l from the finite sum over (m, n) triples. The K table must
/// cover degrees |j| and |l|.
double gamma_coeff(const MultiIndex& j, const MultiIndex& l, const KTable& ktab, const SkCache& sk);

/// Convenience overload that builds the K values it needs.
double gamma_coeff(const MultiIndex& j, const MultiIndex& l, const KernelModel& model);

/// gamma_j^l for j in I_{2 M0}, l in I_{M0}, stored densely by rank.
class GammaTable {
 public:
  GammaTable() = default;
  GammaTable(int M0, std::vector<double> values);

  int M0() const noexcept { return M0_; }
  double at(std::size_t j_rank, std::size_t l_rank) const { return values_[j_rank * cols_ + l_rank]; }
  double at(const MultiIndex& j, const MultiIndex& l) const { return at(rank(j), rank(l)); }

 private:
  int M0_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

GammaTable gamma_table(int M0, const KernelModel& model, int threads = 0);

/// Direct numerical evaluation of the defining integral of gamma_j^l, as an
/// independent check on the closed-form sum. Degrees above 4 are refused
/// (ContractError).
double gamma_direct_oracle(const MultiIndex& j, const MultiIndex& l, const KernelModel& model);

/// All oracle values gamma_j^l with |j|, |l| <= max_degree, indexed
/// [rank(j) * N + rank(l)] with N = basis_size(max_degree). `frame`, if
/// given, is an orthonormal basis the quadrature grid is rotated into.
std::vector<double> gamma_direct_oracle_table(int max_degree, const KernelModel& model,
                                              const std::array<Vec3, 3>* frame = nullptr);

struct TensorEntry {
  std::uint32_t k;
  std::uint32_t i;
  std::uint32_t j;  // i <= j
  double value;

  friend bool operator==(const TensorEntry&, const TensorEntry&) = default;
};

/// Symmetrized collision tensor over I_{M0}. Entries are sorted by (k, i, j)
/// and each stores (A_k^{i,j} + A_k^{j,i}) / 2 with rank(i) <= rank(j).
class CollisionTensor {
 public:
  CollisionTensor() = default;
  CollisionTensor(double eta, int M0, double drop_floor, std::vector<TensorEntry> entries);

  double eta() const noexcept { return eta_; }
  int M0() const noexcept { return M0_; }
  double drop_floor() const noexcept { return drop_floor_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::span<const TensorEntry> entries() const noexcept { return entries_; }

  /// Entries of output row k.
  std::span<const TensorEntry> row(std::size_t k) const;

  /// Symmetrized value for any order of (i, j); zero when not stored.
  double value(std::size_t k, std::size_t i, std::size_t j) const;

  friend bool operator==(const CollisionTensor&, const CollisionTensor&) = default;

 private:
  double eta_ = 0.0;
  int M0_ = 0;
  double drop_floor_ = 0.0;
  std::vector<TensorEntry> entries_;
  std::vector<std::size_t> row_start_;
};

struct AssemblyOptions {
  double drop_floor = 1e-14;
  std::uint64_t memory_cap_bytes = std::uint64_t{16} << 30;
  int threads = 0;  // 0: hardware concurrency
};

/// Dense double-precision storage bound 8 * N_{M0}^3 bytes.
std::uint64_t memory_estimate(int M0);

/// Assembles the symmetrized tensor for I_{M0}. Requires M0 >= 2; throws
/// MemoryCapError when memory_estimate(M0) exceeds the cap.
CollisionTensor assemble(int M0, const KernelModel& model, const AssemblyOptions& options = {});

/// Unsymmetrized A_k^{i,j} straight from the triple sum, for tests.
double raw_tensor_entry(const MultiIndex& k, const MultiIndex& i, const MultiIndex& j, const GammaTable& gamma);

inline constexpr std::uint32_t kCacheFormatVersion = 1;

void save(const CollisionTensor& tensor, const std::filesystem::path& path);

/// Throws CacheFormatError on any malformed input; never returns a partial
/// tensor.
CollisionTensor load(const std::filesystem::path& path);

/// As load(), then throws StaleCacheError when the header's eta or M0 differ
/// from the requested ones.
CollisionTensor load(const std::filesystem::path& path, double eta, int M0);

/// <dir>/A_eta{eta}_M{M0}.bin with eta in shortest round-trip form.
std::filesystem::path cache_path(const std::filesystem::path& dir, double eta, int M0);

/// Shortest decimal string that reads back as the same double.
std::string format_real(double x);

}  // namespace hboltz
