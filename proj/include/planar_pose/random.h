#pragma once

#include <cstdint>
#include <random>

namespace planar_pose {

// Deterministic, platform-independent random source. The engine is
// std::mt19937_64, whose output sequence is fixed by the standard; the
// distributions below are implemented here because the standard library
// ones are not reproducible across implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Independent stream for (seed, index), e.g. one per trial.
  static Rng Stream(uint64_t seed, uint64_t index);

  uint64_t NextU64() { return engine_(); }
  // Uniform in [0, 1).
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer in [0, bound), bound > 0. Rejection sampling, no bias.
  uint64_t UniformIndex(uint64_t bound);
  // Inclusive integer range.
  int UniformInt(int lo, int hi);
  double Normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

uint64_t SplitMix64(uint64_t x);

}  // namespace planar_pose
