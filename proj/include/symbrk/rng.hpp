#pragma once

#include <cstdint>
#include <limits>

namespace symbrk {

namespace detail {

constexpr std::uint64_t splitmix_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based draw: a pure function of (trial seed, node id, round, draw index).
constexpr std::uint64_t rng_draw(std::uint64_t seed, std::uint64_t node, std::uint64_t round, std::uint64_t k) {
  std::uint64_t h = detail::splitmix_finalize(seed + 0x9e3779b97f4a7c15ULL);
  h = detail::splitmix_finalize(h ^ detail::splitmix_finalize(node + 0x632be59bd9b4e019ULL));
  h = detail::splitmix_finalize(h ^ detail::splitmix_finalize(round + 0x8cb92ba72f3d8dd7ULL));
  h = detail::splitmix_finalize(h ^ detail::splitmix_finalize(k + 0xd6e8feb86659fd93ULL));
  return h;
}

/// Maps a 64-bit draw to [0, 1).
constexpr double to_unit(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, bound) from a draw source, unbiased by rejection.
template <class Draw>
std::uint64_t uniform_below(Draw&& draw, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    std::uint64_t x = draw();
    if (x < limit) return x % bound;
  }
}

/// The random stream of one node within one round.
class NodeRng {
 public:
  constexpr NodeRng(std::uint64_t seed, std::uint64_t node, std::uint64_t round)
      : seed_(seed), node_(node), round_(round) {}

  std::uint64_t next() { return rng_draw(seed_, node_, round_, k_++); }
  std::uint64_t below(std::uint64_t bound) {
    return uniform_below([this] { return next(); }, bound);
  }
  bool coin() { return (next() >> 63) != 0; }
  double unit() { return to_unit(next()); }

 private:
  std::uint64_t seed_, node_, round_;
  std::uint64_t k_ = 0;
};

/// Sequential stream for generators and harness-side sampling.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return detail::splitmix_finalize(state_);
  }
  std::uint64_t below(std::uint64_t bound) {
    return uniform_below([this] { return next(); }, bound);
  }
  double unit() { return to_unit(next()); }

 private:
  std::uint64_t state_;
};

}  // namespace symbrk
