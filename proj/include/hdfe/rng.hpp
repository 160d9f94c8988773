#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hdfe {

// Seeded random stream with hand-rolled output distributions.
//
// std::mt19937_64 produces a standardized bit stream, but the standard
// library's distribution objects are implementation-defined, so a config
// generated on one platform would not reproduce on another. All sampling
// here goes through fixed arithmetic on the raw 64-bit outputs: uniforms
// take the top 53 bits, normals use the Box-Muller transform.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  // Standard normal via Box-Muller; consumes two uniforms per pair and
  // caches the second value.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * kPi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // Index in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Modulo bias is < 2^-50 for the sizes used here (n <= ~2^13).
    return gen_() % n;
  }

 private:
  static constexpr double kPi = 3.141592653589793238462643383279502884;
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Independent substream seed for (base seed, stream index), splitmix64
// finalizer over the mixed words.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed ^ (stream * 0x9e3779b97f4a7c15ULL) ^
                    0xd1b54a32d192ed03ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace hdfe
