#pragma once

// Portable random streams.
//
// Every generator is a std::mt19937_64, whose output sequence is fixed by the
// C++ standard. The standard distributions are implementation-defined, so the
// draws below are built from raw 64-bit outputs only; corpora generated on
// any conforming platform are identical.
//
// Stream splitting: each pipeline stage derives its own seed with
// child_seed(parent, "stage") = splitmix64(parent ^ fnv1a64("stage")). Child
// streams for indexed work items use child_seed(parent, index).

#include <cstdint>
#include <random>
#include <string_view>

namespace ccbench {

inline constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                       std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t child_seed(std::uint64_t parent, std::string_view stream) {
  return splitmix64(parent ^ fnv1a64(stream));
}

inline constexpr std::uint64_t child_seed(std::uint64_t parent, std::uint64_t index) {
  return splitmix64(splitmix64(parent) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). Rejection keeps it exactly uniform.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Number of trials up to and including the first success, support {1, 2, ...}.
  std::uint64_t geometric(double p) {
    std::uint64_t k = 1;
    while (!bernoulli(p)) ++k;
    return k;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ccbench
