#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace onestep {

/// Seedable, splittable random stream. Stream `i` of seed `s` is an
/// independent mt19937_64 whose state is derived from (s, i) with
/// SplitMix64. Uniforms take the top 53 bits; normals use the Marsaglia
/// polar method. All of it is specified bit-for-bit, so output does not
/// depend on the standard library implementation.
class RandomStream {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64-splitmix64-polar";

  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  double normal();
  /// Exponential with unit rate.
  double exponential();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace onestep
