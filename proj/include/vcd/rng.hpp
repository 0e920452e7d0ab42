#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace vcd {

/// Portable seeded generator ("vcd-rng-v1"): std::mt19937_64 for the bit
/// stream, with hand-written uniform/normal/bounded transforms so that
/// sequences are identical across standard library implementations.
class Rng {
 public:
  static constexpr const char* kName = "vcd-rng-v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller (one variate per call, no caching).
  double normal();
  /// Uniform integer in [0, n), n > 0, by rejection.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

/// Derives an independent stream seed from a base seed and a tag.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

/// Uniformly random k-subset of [0, n) (partial Fisher-Yates), sorted.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng);

}  // namespace vcd
