#ifndef MGB_RNG_HPP
#define MGB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace mgb {

// Random stream "mgb-rng-v1".
//
// Engine: std::mt19937_64 (bit-exact across standard libraries). Variates
// are produced from raw engine output here rather than through <random>
// distributions, whose algorithms are implementation-defined.
//
// Stream splitting: stream k of master seed s is seeded with
//   splitmix64(s ^ splitmix64(k + 0x9E3779B97F4A7C15))
// so streams for different k are decorrelated and independent of the
// order or thread on which they are created.
inline constexpr const char* kRngName = "mgb-rng-v1/mt19937_64+splitmix64";

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master ^ splitmix64(stream + 0x9E3779B97F4A7C15ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t master, std::uint64_t stream) : engine_(derive_seed(master, stream)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unit-mean exponential by inversion.
  double exponential() { return -std::log1p(-uniform()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mgb

#endif
