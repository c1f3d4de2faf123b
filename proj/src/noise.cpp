#include "spinet/noise.hpp"

#include <cmath>
#include <numbers>

namespace spinet {

double normal_deviate(uint64_t seed, uint64_t path, uint64_t step, uint64_t stream) {
  const double u1 = detail::to_unit_interval(detail::hash_counter(seed, path, step, 2 * stream));
  const double u2 = detail::to_unit_interval(detail::hash_counter(seed, path, step, 2 * stream + 1));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double uniform_deviate(uint64_t seed, uint64_t path, uint64_t step, uint64_t stream) {
  // Offset keeps the uniform streams disjoint from the Box-Muller pairs.
  return detail::to_unit_interval(
      detail::hash_counter(seed, path, step, 0x8000000000000000ULL + stream));
}

double NoisePath::increment(uint64_t step) const {
  return normal_deviate(seed, path_index, step, 0) * std::sqrt(dt);
}

}  // namespace spinet
