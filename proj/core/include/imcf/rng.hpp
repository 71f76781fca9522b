// Seeded RNG with explicit bit-to-double mapping so that streams are
// reproducible independent of standard-library distribution internals.
#pragma once

#include <cstdint>
#include <random>

namespace imcf {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t bits() { return gen_(); }

  // uniform in [0, 1)
  double u01() { return double(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * u01(); }

  // uniform integer in [0, n)
  std::uint64_t index(std::uint64_t n) { return n ? gen_() % n : 0; }

  // derived deterministic substream (used for rejection re-draws)
  Rng substream(std::uint64_t k) const {
    return Rng(seed_ ^ (0x9e3779b97f4a7c15ull * (k + 1)));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace imcf
