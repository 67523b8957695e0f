#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace niid {

/// SplitMix64 finalizer.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/**
 * Seeded random source with a fully specified output stream.
 *
 * The engine is std::mt19937_64, whose sequence is fixed by the standard.
 * The derived draws below avoid the standard distributions, whose outputs
 * are implementation-defined, so a seed reproduces the same numbers on every
 * toolchain:
 *   uniform()  - top 53 bits of one engine output, scaled to [0, 1)
 *   below(b)   - rejection sampling on engine outputs, then modulo b
 *   normal()   - Marsaglia polar method, second variate cached
 *
 * Independent sub-streams: for_stream(seed, s) seeds the engine with
 * splitmix64(seed ^ splitmix64(s)).
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  [[nodiscard]] static Rng for_stream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(splitmix64(seed ^ splitmix64(stream)));
  }

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  double normal();

  /// Fisher-Yates, walking from the back.
  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

/// Uniformly random permutation of 0..n-1.
[[nodiscard]] std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng);

}  // namespace niid
