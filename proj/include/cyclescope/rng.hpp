#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <span>
#include <vector>

namespace cyclescope {

// One splitmix64 step. Used to derive independent substream seeds so that
// sessions (and games) can be generated in any order, or in parallel, with
// identical results.
constexpr std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seedable random stream over std::mt19937_64. The engine's raw 64-bit
// output sequence is pinned by the standard; the draw helpers below replace
// std::uniform_*_distribution, whose output is implementation-defined, so
// trajectories are reproducible across standard libraries.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  // Stream for substream `id` of `seed`. Hash-mixes both, so neighbouring
  // ids give unrelated streams.
  static RngStream substream(std::uint64_t seed, std::uint64_t id) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64_next(s);
    s ^= id * 0x9e3779b97f4a7c15ULL;
    std::uint64_t b = splitmix64_next(s);
    return RngStream(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

  // Unbiased uniform integer in [0, bound); bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::domain_error("RngStream::below: bound must be >= 1");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = next_u64();
      if (x >= threshold) return x % bound;
    }
  }

  // Fisher-Yates shuffle driven by below(); deterministic for a given state.
  template <class T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  // Index draw from non-negative weights (need not be normalized).
  std::size_t categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double r = uniform01() * total;
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      cum += weights[i];
      if (r < cum) return i;
    }
    return weights.size() - 1;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cyclescope
