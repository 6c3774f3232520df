#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sscomp {

/// Name recorded in output metadata so datasets can be regenerated elsewhere.
inline constexpr std::string_view kRngName = "mt19937_64/box-muller";

/// SplitMix64 finalizer; used to derive independent child seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Child seed for stream `index` of `master`. Pure function of its inputs, so
/// any single trial can be rerun in isolation.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Portable random stream. std::mt19937_64 has a standardized output
/// sequence; the distributions are implemented here because the standard
/// library ones are not bit-reproducible across implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  /// Standard normal via Box-Muller; the second variate is cached.
  double normal();

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace sscomp
