#ifndef WAVEGEOM_RNG_HPP
#define WAVEGEOM_RNG_HPP

// Seeded RNG with implementation-independent output, so that reports built
// from random sampling are reproducible byte for byte across toolchains.
// (std::uniform_real_distribution is implementation-defined; we avoid it.)

#include <cstdint>

#include "wavegeom/vec.hpp"

namespace wavegeom {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  // splitmix64
  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  Vec3 in_box(double radius) {
    return {uniform(-radius, radius), uniform(-radius, radius), uniform(-radius, radius)};
  }

  // Uniform direction via the inverse-CDF map on (cos theta, phi).
  Vec3 direction() {
    const double mu = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, 6.283185307179586476925286766559);
    const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    return {s * std::cos(phi), s * std::sin(phi), mu};
  }

 private:
  std::uint64_t state_;
};

}  // namespace wavegeom

#endif
