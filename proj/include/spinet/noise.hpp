// Counter-based Gaussian noise: every increment is a pure function of
// (seed, path index, step index), so trajectories are reproducible in
// isolation and parallel execution order cannot change results.
#pragma once

#include <cstdint>

namespace spinet {

namespace detail {

inline uint64_t mix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline uint64_t hash_counter(uint64_t seed, uint64_t path, uint64_t step, uint64_t stream) {
  uint64_t h = mix64(seed ^ 0x6A09E667F3BCC909ULL);
  h = mix64(h ^ path);
  h = mix64(h ^ step);
  h = mix64(h ^ stream);
  return h;
}

// Uniform in (0,1), never exactly 0 or 1.
inline double to_unit_interval(uint64_t bits) {
  return (double(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace detail

// Standard normal deviate for a given counter, via Box-Muller.
double normal_deviate(uint64_t seed, uint64_t path, uint64_t step, uint64_t stream = 0);

// Uniform deviate in (0,1) for a given counter.
double uniform_deviate(uint64_t seed, uint64_t path, uint64_t step, uint64_t stream = 0);

// Wiener increments dW ~ Normal(0, dt) for one trajectory.
struct NoisePath {
  uint64_t seed = 0;
  uint64_t path_index = 0;
  double dt = 1e-3;

  double increment(uint64_t step) const;
};

}  // namespace spinet
