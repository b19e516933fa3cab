#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace xinfl {

// SplitMix64 (Steele, Lea & Flood). Part of the reproducibility contract:
// every seeded shuffle in the toolkit is driven by this generator so that
// splits and training orders can be reproduced in any language.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound) by modulo reduction. The slight bias is accepted;
  // it is part of the documented algorithm.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

 private:
  std::uint64_t state_;
};

// Fisher-Yates from the back: for i = n-1 .. 1, swap(v[i], v[below(i+1)]).
template <typename T>
void seeded_shuffle(std::vector<T>& v, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.below(i));
    using std::swap;
    swap(v[i - 1], v[j]);
  }
}

}  // namespace xinfl
