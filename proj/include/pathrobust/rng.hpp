#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pathrobust {

// Deterministic generator. std::mt19937_64 output is fixed by the standard;
// the distributions below are hand-rolled because the standard ones are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi);
  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

// splitmix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

// Stable 64-bit hash of a byte string (FNV-1a followed by mix64).
std::uint64_t stable_hash(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ull);

}  // namespace pathrobust
