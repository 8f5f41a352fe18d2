#pragma once

#include <cstdint>
#include <random>

namespace polya {

/// Identifies one independent random stream. `purpose` separates streams
/// used for different jobs (path simulation, bootstrap resampling) under the
/// same seed.
struct StreamKey {
  std::uint64_t master_seed = 0;
  std::uint64_t replicate_index = 0;
  std::uint64_t purpose = 0;
};

inline constexpr std::uint64_t kSimulationStream = 0;
inline constexpr std::uint64_t kBootstrapStream = 1;
inline constexpr std::uint64_t kSamplingStream = 2;

/// mt19937_64 seeded from all words of the key through std::seed_seq, so a
/// replicate's stream depends on its key alone and not on scheduling.
class StreamRng {
 public:
  explicit StreamRng(const StreamKey& key) {
    auto lo = [](std::uint64_t x) { return static_cast<std::uint32_t>(x); };
    auto hi = [](std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); };
    std::seed_seq seq{lo(key.master_seed), hi(key.master_seed), lo(key.replicate_index),
                      hi(key.replicate_index), lo(key.purpose), hi(key.purpose), 0x9e3779b9u};
    engine_.seed(seq);
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits; fixed formula so streams are
  /// identical across standard library implementations.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace polya
