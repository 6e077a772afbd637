#include "hboltz/collision_tensor.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>

#include "hboltz/errors.hpp"
#include "hboltz/parallel.hpp"

namespace hboltz {

// ---------------------------------------------------------------- K and gamma

KTable::KTable(int kmax, int lmax, const KernelModel& model) : kmax_(kmax), lmax_(lmax)
{
  const int mcols = kmax / 2 + 1;
  values_.assign(static_cast<std::size_t>((kmax + 1) * (lmax + 1) * mcols), 0.0);
  for (int k = 0; k <= kmax; ++k) {
    for (int l = 0; l <= lmax; ++l) {
      for (int m = 0; 2 * m <= k; ++m) {
        const int twice_n = l - k + 2 * m;
        if (twice_n < 0 || twice_n % 2 != 0 || twice_n > l) continue;
        values_[static_cast<std::size_t>((k * (lmax + 1) + l) * mcols + m)] = k_coeff(k, l, m, twice_n / 2, model);
      }
    }
  }
}

double KTable::operator()(int k, int l, int m, int n) const
{
  if (k > kmax_ || l > lmax_) throw ContractError("KTable: degree outside the table");
  if (k - 2 * m != l - 2 * n) return 0.0;
  return values_[static_cast<std::size_t>((k * (lmax_ + 1) + l) * (kmax_ / 2 + 1) + m)];
}

double gamma_coeff(const MultiIndex& j, const MultiIndex& l, const KTable& ktab, const SkCache& sk)
{
  const int kj = j.degree();
  const int kl = l.degree();
  double sum = 0.0;
  for (int m1 = 0; 2 * m1 <= j.k1; ++m1) {
    for (int m2 = 0; 2 * m2 <= j.k2; ++m2) {
      for (int m3 = 0; 2 * m3 <= j.k3; ++m3) {
        const int mt = m1 + m2 + m3;
        const int r = kj - 2 * mt;
        if (r == 0 || kl < r || (kl - r) % 2 != 0) continue;
        const int nt = (kl - r) / 2;
        const double kval = ktab(kj, kl, mt, nt);
        if (kval == 0.0) continue;
        const MultiIndex m{m1, m2, m3};
        const MultiIndex jr{j.k1 - 2 * m1, j.k2 - 2 * m2, j.k3 - 2 * m3};
        const double cm = c_coeff(j, m);
        const SkTable& s = sk.get(r);
        for (int n1 = 0; 2 * n1 <= l.k1 && n1 <= nt; ++n1) {
          for (int n2 = 0; 2 * n2 <= l.k2 && n1 + n2 <= nt; ++n2) {
            const int n3 = nt - n1 - n2;
            if (2 * n3 > l.k3) continue;
            const MultiIndex n{n1, n2, n3};
            const double sval = s.coefficient(jr, {l.k1 - 2 * n1, l.k2 - 2 * n2, l.k3 - 2 * n3});
            if (sval == 0.0) continue;
            sum += (2.0 * r + 1.0) * cm * c_coeff(l, n) * sval * kval;
          }
        }
      }
    }
  }
  return sum;
}

double gamma_coeff(const MultiIndex& j, const MultiIndex& l, const KernelModel& model)
{
  const KTable ktab(j.degree(), l.degree(), model);
  const SkCache sk;
  return gamma_coeff(j, l, ktab, sk);
}

GammaTable::GammaTable(int M0, std::vector<double> values)
    : M0_(M0), cols_(basis_size(M0)), values_(std::move(values))
{
  if (values_.size() != basis_size(2 * M0) * cols_) throw ContractError("GammaTable: size mismatch");
}

GammaTable gamma_table(int M0, const KernelModel& model, int threads)
{
  const KTable ktab(2 * M0, M0, model);
  const SkCache sk;
  for (int d = 0; d <= 2 * M0; ++d) sk.get(d);
  const auto rows = index_set(2 * M0);
  const auto cols = index_set(M0);
  std::vector<double> values(rows.size() * cols.size(), 0.0);
  parallel_for(rows.size(), threads, [&](std::size_t r) {
    for (std::size_t c = 0; c < cols.size(); ++c) values[r * cols.size() + c] = gamma_coeff(rows[r], cols[c], ktab, sk);
  });
  return GammaTable(M0, std::move(values));
}

// ---------------------------------------------------------------- assembly

namespace {

// Precomputed pieces of the triple sum for A_k^{i,j}.
class Assembler {
 public:
  Assembler(int M0, const GammaTable& gamma) : M0_(M0), D_(2 * M0 + 1), gamma_(gamma)
  {
    rank3_.resize(static_cast<std::size_t>(D_ * D_ * D_));
    for (int a = 0; a < D_; ++a)
      for (int b = 0; b < D_; ++b)
        for (int c = 0; c < D_; ++c) rank3_[static_cast<std::size_t>((a * D_ + b) * D_ + c)] = rank({a, b, c});

    // coef(i, j, ip, kk) = a_{ip, i+j-ip}^{ij} / (kk - ip)!
    const int e = M0 + 1;
    coef_.assign(static_cast<std::size_t>(e * e * D_ * e), 0.0);
    for (int i = 0; i <= M0; ++i)
      for (int j = 0; j <= M0; ++j)
        for (int ip = 0; ip <= i + j; ++ip) {
          const double a = a_coeff(i, j, ip, i + j - ip);
          for (int kk = ip; kk <= M0; ++kk) coef_[index(i, j, ip, kk)] = a * std::exp(-log_factorial(kk - ip));
        }
    for (int d = 0; d <= M0; ++d) pref_.push_back(std::pow(2.0, -0.5 * d) / (8.0 * std::pow(std::numbers::pi, 1.5)));
  }

  double entry(const MultiIndex& k, const MultiIndex& i, const MultiIndex& j) const
  {
    const int top1 = std::min(i.k1 + j.k1, k.k1);
    const int top2 = std::min(i.k2 + j.k2, k.k2);
    const int top3 = std::min(i.k3 + j.k3, k.k3);
    double sum = 0.0;
    for (int p1 = 0; p1 <= top1; ++p1) {
      const double c1 = coef_[index(i.k1, j.k1, p1, k.k1)];
      if (c1 == 0.0) continue;
      for (int p2 = 0; p2 <= top2; ++p2) {
        const double c2 = c1 * coef_[index(i.k2, j.k2, p2, k.k2)];
        if (c2 == 0.0) continue;
        for (int p3 = 0; p3 <= top3; ++p3) {
          const double c3 = c2 * coef_[index(i.k3, j.k3, p3, k.k3)];
          if (c3 == 0.0) continue;
          const std::size_t jp = rank_of(i.k1 + j.k1 - p1, i.k2 + j.k2 - p2, i.k3 + j.k3 - p3);
          const std::size_t lp = rank_of(k.k1 - p1, k.k2 - p2, k.k3 - p3);
          sum += c3 * gamma_.at(jp, lp);
        }
      }
    }
    return pref_[static_cast<std::size_t>(k.degree())] * sum;
  }

 private:
  std::size_t index(int i, int j, int ip, int kk) const
  {
    const int e = M0_ + 1;
    return static_cast<std::size_t>(((i * e + j) * D_ + ip) * e + kk);
  }
  std::size_t rank_of(int a, int b, int c) const { return rank3_[static_cast<std::size_t>((a * D_ + b) * D_ + c)]; }

  int M0_;
  int D_;
  const GammaTable& gamma_;
  std::vector<std::size_t> rank3_;
  std::vector<double> coef_;
  std::vector<double> pref_;
};

}  // namespace

std::uint64_t memory_estimate(int M0)
{
  const auto n = static_cast<std::uint64_t>(basis_size(M0));
  return 8 * n * n * n;
}

CollisionTensor::CollisionTensor(double eta, int M0, double drop_floor, std::vector<TensorEntry> entries)
    : eta_(eta), M0_(M0), drop_floor_(drop_floor), entries_(std::move(entries))
{
  const std::size_t n = basis_size(M0);
  auto key = [](const TensorEntry& e) { return std::tuple{e.k, e.i, e.j}; };
  for (std::size_t p = 0; p < entries_.size(); ++p) {
    const auto& e = entries_[p];
    if (e.k >= n || e.j >= n || e.i > e.j) throw ContractError("CollisionTensor: entry outside I_M0 or i > j");
    if (p > 0 && !(key(entries_[p - 1]) < key(e))) throw ContractError("CollisionTensor: entries not sorted");
  }
  row_start_.assign(n + 1, 0);
  for (const auto& e : entries_) ++row_start_[e.k + 1];
  for (std::size_t k = 0; k < n; ++k) row_start_[k + 1] += row_start_[k];
}

std::span<const TensorEntry> CollisionTensor::row(std::size_t k) const
{
  if (k + 1 >= row_start_.size()) throw ContractError("CollisionTensor::row: rank outside I_M0");
  return std::span<const TensorEntry>(entries_).subspan(row_start_[k], row_start_[k + 1] - row_start_[k]);
}

double CollisionTensor::value(std::size_t k, std::size_t i, std::size_t j) const
{
  if (i > j) std::swap(i, j);
  const auto r = row(k);
  const auto it = std::lower_bound(r.begin(), r.end(), std::pair{i, j}, [](const TensorEntry& e, const auto& p) {
    return std::pair<std::size_t, std::size_t>{e.i, e.j} < p;
  });
  if (it != r.end() && it->i == i && it->j == j) return it->value;
  return 0.0;
}

CollisionTensor assemble(int M0, const KernelModel& model, const AssemblyOptions& options)
{
  if (M0 < 2) throw ContractError("assemble: M0 must be at least 2");
  const std::uint64_t estimate = memory_estimate(M0);
  if (estimate > options.memory_cap_bytes) {
    std::ostringstream msg;
    msg << "dense tensor estimate " << static_cast<double>(estimate) / double(1u << 30) << " GiB exceeds the cap of "
        << static_cast<double>(options.memory_cap_bytes) / double(1u << 30) << " GiB";
    throw MemoryCapError(msg.str(), estimate, options.memory_cap_bytes);
  }

  const GammaTable gamma = gamma_table(M0, model, options.threads);
  const Assembler asm_(M0, gamma);
  const auto idx = index_set(M0);
  const std::size_t n = idx.size();
  const double floor = options.drop_floor;

  std::vector<std::vector<TensorEntry>> rows(n);
  parallel_for(n, options.threads, [&](std::size_t k) {
    auto& out = rows[k];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        double v = asm_.entry(idx[k], idx[i], idx[j]);
        if (i != j) v = 0.5 * (v + asm_.entry(idx[k], idx[j], idx[i]));
        if (v == 0.0 || std::abs(v) < floor) continue;
        out.push_back({static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), v});
      }
    }
  });

  std::vector<TensorEntry> entries;
  std::size_t total = 0;
  for (const auto& r : rows) total += r.size();
  entries.reserve(total);
  for (auto& r : rows) entries.insert(entries.end(), r.begin(), r.end());
  return CollisionTensor(model.eta(), M0, floor, std::move(entries));
}

double raw_tensor_entry(const MultiIndex& k, const MultiIndex& i, const MultiIndex& j, const GammaTable& gamma)
{
  const int M0 = gamma.M0();
  if (k.degree() > M0 || i.degree() > M0 || j.degree() > M0) throw ContractError("raw_tensor_entry: index outside I_M0");
  double sum = 0.0;
  for (int p1 = 0; p1 <= std::min(i.k1 + j.k1, k.k1); ++p1)
    for (int p2 = 0; p2 <= std::min(i.k2 + j.k2, k.k2); ++p2)
      for (int p3 = 0; p3 <= std::min(i.k3 + j.k3, k.k3); ++p3) {
        const MultiIndex jp{i.k1 + j.k1 - p1, i.k2 + j.k2 - p2, i.k3 + j.k3 - p3};
        const MultiIndex lp{k.k1 - p1, k.k2 - p2, k.k3 - p3};
        const double a = a_coeff(i.k1, j.k1, p1, jp.k1) * a_coeff(i.k2, j.k2, p2, jp.k2) *
                         a_coeff(i.k3, j.k3, p3, jp.k3);
        const double lf = log_factorial(lp.k1) + log_factorial(lp.k2) + log_factorial(lp.k3);
        sum += a * std::exp(-lf) * gamma.at(jp, lp);
      }
  return std::pow(2.0, -0.5 * k.degree()) / (8.0 * std::pow(std::numbers::pi, 1.5)) * sum;
}

// ---------------------------------------------------------------- cache file

namespace {

constexpr char kMagic[8] = {'H', 'B', 'L', 'T', 'Z', 'A', '0', '1'};
constexpr std::size_t kHeaderBytes = 4 + 8 + 4 + 8 + 8;
constexpr std::size_t kEntryBytes = 4 + 4 + 4 + 8;

std::uint64_t fnv1a(const std::uint8_t* data, std::size_t size)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= data[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Writer {
 public:
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  std::vector<std::uint8_t> bytes;

 private:
  void put(std::uint64_t v, int n)
  {
    for (int b = 0; b < n; ++b) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
  }
};

class Reader {
 public:
  Reader(const std::uint8_t* p) : p_(p) {}
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  double f64() { return std::bit_cast<double>(get(8)); }

 private:
  std::uint64_t get(int n)
  {
    std::uint64_t v = 0;
    for (int b = 0; b < n; ++b) v |= static_cast<std::uint64_t>(p_[b]) << (8 * b);
    p_ += n;
    return v;
  }
  const std::uint8_t* p_;
};

}  // namespace

void save(const CollisionTensor& tensor, const std::filesystem::path& path)
{
  Writer w;
  w.u32(kCacheFormatVersion);
  w.f64(tensor.eta());
  w.u32(static_cast<std::uint32_t>(tensor.M0()));
  w.f64(tensor.drop_floor());
  w.u64(tensor.size());
  for (const auto& e : tensor.entries()) {
    w.u32(e.k);
    w.u32(e.i);
    w.u32(e.j);
    w.f64(e.value);
  }
  const std::uint64_t sum = fnv1a(w.bytes.data(), w.bytes.size());

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheFormatError(CacheFormatError::Kind::io, "cannot open " + tmp.string() + " for writing");
    out.write(kMagic, sizeof kMagic);
    out.write(reinterpret_cast<const char*>(w.bytes.data()), static_cast<std::streamsize>(w.bytes.size()));
    Writer tail;
    tail.u64(sum);
    out.write(reinterpret_cast<const char*>(tail.bytes.data()), 8);
    if (!out) throw CacheFormatError(CacheFormatError::Kind::io, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

CollisionTensor load(const std::filesystem::path& path)
{
  using Kind = CacheFormatError::Kind;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheFormatError(Kind::io, "cannot open " + path.string());
  const std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string name = path.string();

  if (data.size() < sizeof kMagic) throw CacheFormatError(Kind::truncated, name + ": file shorter than the magic");
  if (std::memcmp(data.data(), kMagic, sizeof kMagic) != 0) throw CacheFormatError(Kind::bad_magic, name + ": not a tensor cache file");
  if (data.size() < sizeof kMagic + kHeaderBytes) throw CacheFormatError(Kind::truncated, name + ": truncated header");

  Reader r(data.data() + sizeof kMagic);
  const std::uint32_t version = r.u32();
  if (version != kCacheFormatVersion) {
    throw CacheFormatError(Kind::bad_version, name + ": format version " + std::to_string(version) + ", expected " +
                                                  std::to_string(kCacheFormatVersion));
  }
  const double eta = r.f64();
  const std::uint32_t M0 = r.u32();
  const double floor = r.f64();
  const std::uint64_t count = r.u64();

  const std::size_t payload = kHeaderBytes;
  if (count > (data.size() - sizeof kMagic - payload) / kEntryBytes) {
    throw CacheFormatError(Kind::truncated, name + ": truncated entry block");
  }
  const std::size_t expected = sizeof kMagic + payload + count * kEntryBytes + 8;
  if (data.size() < expected) throw CacheFormatError(Kind::truncated, name + ": missing checksum");
  if (data.size() > expected) throw CacheFormatError(Kind::malformed, name + ": trailing bytes after checksum");

  const std::uint64_t sum = fnv1a(data.data() + sizeof kMagic, expected - sizeof kMagic - 8);
  Reader tail(data.data() + expected - 8);
  if (tail.u64() != sum) throw CacheFormatError(Kind::checksum, name + ": checksum mismatch");

  if (M0 > 200) throw CacheFormatError(Kind::malformed, name + ": implausible M0");
  std::vector<TensorEntry> entries(count);
  for (auto& e : entries) {
    e.k = r.u32();
    e.i = r.u32();
    e.j = r.u32();
    e.value = r.f64();
  }
  try {
    return CollisionTensor(eta, static_cast<int>(M0), floor, std::move(entries));
  } catch (const ContractError& err) {
    throw CacheFormatError(Kind::malformed, name + ": " + err.what());
  }
}

CollisionTensor load(const std::filesystem::path& path, double eta, int M0)
{
  CollisionTensor t = load(path);
  if (t.eta() != eta || t.M0() != M0) {
    throw StaleCacheError(path.string() + " was assembled for eta=" + format_real(t.eta()) + ", M0=" +
                          std::to_string(t.M0()) + " but eta=" + format_real(eta) + ", M0=" + std::to_string(M0) +
                          " was requested; run `hboltz assemble` again");
  }
  return t;
}

std::string format_real(double x)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::filesystem::path cache_path(const std::filesystem::path& dir, double eta, int M0)
{
  return dir / ("A_eta" + format_real(eta) + "_M" + std::to_string(M0) + ".bin");
}

}  // namespace hboltz
