#pragma once

#include <cstdint>
#include <random>

namespace fogsched {

// Independent substreams are keyed by (master seed, stream, purpose) through
// std::seed_seq, so replications and the arrival/duration processes never
// share a generator state.
enum class StreamPurpose : std::uint32_t { Arrivals = 1, Durations = 2, Scenario = 3 };

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream, StreamPurpose purpose);

  std::uint64_t next() { return engine_(); }

  // Uniform on (0, 1]; never zero so logarithms and negative powers are finite.
  double open_unit() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * (open_unit() - 0x1.0p-53); }

  // Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi);

 private:
  std::mt19937_64 engine_;
};

// Mixes a parent seed with an index into a new 64-bit seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace fogsched
