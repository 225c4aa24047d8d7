#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace creditworks {

// Seeded generator with a fully pinned output sequence.
//
// std::mt19937_64 is bit-exact across standard libraries, but the standard
// distributions are not, so bounded integers and shuffles are implemented
// here on top of the raw 64-bit stream. Independent streams are derived from
// (seed, stream index) with SplitMix64 so parallel consumers (one per tree)
// never share state and never depend on scheduling order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be > 0. Rejection sampling,
  // so the result is exactly uniform.
  std::uint64_t below(std::uint64_t bound);

  // Uniform double in [0, 1) built from the top 53 bits.
  double uniform();

  // Standard normal via Box-Muller (used by fixture generators).
  double normal();

  // Fisher-Yates, drawing j uniformly from [0, i].
  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  // k distinct values from [0, n) in draw order (partial Fisher-Yates).
  std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                      std::size_t k);

  static std::uint64_t splitmix64(std::uint64_t x);

 private:
  std::mt19937_64 engine_;
};

}  // namespace creditworks
