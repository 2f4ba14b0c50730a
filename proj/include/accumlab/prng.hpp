#pragma once

#include <cstdint>
#include <vector>

#include "accumlab/error.hpp"
#include "accumlab/rational.hpp"

namespace accumlab {

// Self-contained splitmix64 generator. The standard <random> distributions
// are implementation-defined, which would break byte-identical reports
// across toolchains, so all randomized suites draw from this instead.
//
// Substream scheme: case i of a suite seeded with S uses
// Rng(mix(S, i)); the mix is splitmix64's own finalizer over S xor a
// counter-scaled odd constant, so substreams never correlate.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t mix(std::uint64_t seed, std::uint64_t counter) {
    return finalize(seed ^ (0x9e3779b97f4a7c15ULL * (counter + 1)));
  }

  static Rng substream(std::uint64_t seed, std::uint64_t counter) {
    return Rng(mix(seed, counter));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return finalize(state_);
  }

  /// Uniform in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    require(n > 0, "invalid-bound", "Rng::below needs a positive bound");
    // Rejection sampling keeps the draw unbiased.
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
  }

  std::int64_t int_in(std::int64_t lo, std::int64_t hi) {
    require(lo <= hi, "invalid-bound", "Rng::int_in with lo > hi");
    return lo + static_cast<std::int64_t>(
                    below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool coin() { return (next_u64() & 1u) != 0; }

  /// Uniform on the grid {lo/den, (lo+1)/den, ..., hi/den}.
  Rat rat_grid(std::int64_t lo, std::int64_t hi, std::int64_t den) {
    return Rat(int_in(lo, hi), den);
  }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    require(!v.empty(), "invalid-bound", "Rng::pick on empty vector");
    return v[below(v.size())];
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  static std::uint64_t finalize(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
};

}  // namespace accumlab
