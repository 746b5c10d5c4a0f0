#pragma once

#include <cstdint>
#include <random>

namespace ordtest {

/// splitmix64 finalizer (Steele, Lea & Flood 2014).
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for stream `stream_index` of a run keyed by `base_seed`:
///   splitmix64(base_seed ^ (0x9E3779B97F4A7C15 * (stream_index + 1))).
/// Stateless, so streams can be created in any order on any worker and a
/// run is reproducible under any parallel schedule.
std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t stream_index);

/// mt19937_64 with a pinned uniform-double convention (top 53 bits), so
/// sequences are bit-identical across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1): (next_u64() >> 11) * 2^-53.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ordtest
