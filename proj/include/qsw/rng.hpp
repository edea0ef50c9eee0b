#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace qsw {

// Replicate-owned RNG stream: mt19937_64 seeded by mixing
// (master seed, stream index) through the splitmix64 finalizer.
// Within-implementation determinism only; cross-language bit equality is a
// non-goal.
class RngStream {
 public:
  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : gen_(splitmix64(master_seed ^ splitmix64(stream_index))) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1), 53 bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Inverse-CDF draw from a discrete law given by probabilities over
  // indices 0..k-1 in natural order; assumes the probabilities sum to ~1.
  int sample(const std::vector<double>& probs) {
    double u = uniform();
    double acc = 0.0;
    int last = static_cast<int>(probs.size()) - 1;
    for (int i = 0; i <= last; ++i) {
      acc += probs[i];
      if (u < acc) return i;
    }
    return last; // guard against rounding spill
  }

 private:
  std::mt19937_64 gen_;
};

} // namespace qsw
