#ifndef GRAPHON_LDP_RANDOM_H_
#define GRAPHON_LDP_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <limits>

namespace graphon_ldp {

// SplitMix64 used as a counter-based generator.
//
// The stream for a 64-bit seed is keyed by key = Mix(seed); the k-th output is
// Mix(key + (k + 1) * kGamma). Any output can therefore be computed directly
// from (seed, k), which is how the sampler draws pair (i, j) from its
// lexicographic pair index regardless of evaluation order.
inline constexpr std::uint64_t kSplitMixGamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t SplitMixFinalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t CounterHash(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t key = SplitMixFinalize(seed);
  return SplitMixFinalize(key + (counter + 1) * kSplitMixGamma);
}

// Independent child seed for sub-run `index` (restart, ensemble member, ...).
constexpr std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t index) {
  return CounterHash(master ^ 0x6a09e667f3bcc909ULL, index);
}

// Uniform double in [0, 1) with 53 random bits.
constexpr double ToUnitInterval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return CounterHash(seed_, counter_++); }

  double Uniform() { return ToUnitInterval((*this)()); }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform in {0, ..., n-1}.
  std::size_t Index(std::size_t n) {
    const unsigned __int128 wide =
        static_cast<unsigned __int128>((*this)()) * static_cast<unsigned __int128>(n);
    return static_cast<std::size_t>(wide >> 64);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace graphon_ldp

#endif  // GRAPHON_LDP_RANDOM_H_
