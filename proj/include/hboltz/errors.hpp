#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hboltz {

/// Process exit codes used by the command-line tool. Every library error
/// maps onto one of these through exit_code_for().
enum class ExitCode : int {
  ok = 0,
  usage = 1,
  config = 2,
  cache_miss = 3,
  memory_refusal = 4,
  numerical = 5,
  cache_format = 6,
};

/// A caller violated a documented precondition.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double estimate, double achieved_error)
      : std::runtime_error(what), estimate_(estimate), error_(achieved_error)
  {
  }
  double estimate() const noexcept { return estimate_; }
  double achieved_error() const noexcept { return error_; }

 private:
  double estimate_;
  double error_;
};

/// The state became non-finite during time integration.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double last_good_time)
      : std::runtime_error(what), last_good_time_(last_good_time)
  {
  }
  double last_good_time() const noexcept { return last_good_time_; }

 private:
  double last_good_time_;
};

/// Tensor assembly refused because the dense memory estimate exceeds the cap.
class MemoryCapError : public std::runtime_error {
 public:
  MemoryCapError(const std::string& what, std::uint64_t estimate_bytes, std::uint64_t cap_bytes)
      : std::runtime_error(what), estimate_(estimate_bytes), cap_(cap_bytes)
  {
  }
  std::uint64_t estimate_bytes() const noexcept { return estimate_; }
  std::uint64_t cap_bytes() const noexcept { return cap_; }

 private:
  std::uint64_t estimate_;
  std::uint64_t cap_;
};

/// Problems reading a tensor cache file.
class CacheFormatError : public std::runtime_error {
 public:
  enum class Kind { io, bad_magic, bad_version, truncated, checksum, malformed };

  CacheFormatError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// A cache file exists but was built for different parameters.
class StaleCacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No cache file for the requested (eta, M0).
class CacheMissError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hboltz
