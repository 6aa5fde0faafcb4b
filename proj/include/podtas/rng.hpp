// Seeded RNG with a fixed uniform mapping. std::uniform_real_distribution
// is implementation-defined, which would let the standard library change
// training traces under us; the 53-bit ldexp construction is pinned.
#pragma once

#include <cstdint>
#include <random>

namespace podtas {

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(uint64_t seed) : gen(seed) {}

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * ((gen() >> 11) * 0x1.0p-53);
  }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + int(gen() % uint64_t(hi - lo + 1));
  }
};

}  // namespace podtas
