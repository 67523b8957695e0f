#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "niid/knn.hpp"

namespace niid {

/// Index distances |i - j| over every directed neighbor pair, collected in
/// row order. A mutual pair contributes twice.
struct ForegroundSample {
  std::vector<std::size_t> values;
};

/**
 * CDF of the index distance between a uniformly random unordered pair of
 * distinct positions in a dataset of size n:
 *
 *   B(d) = sum_{d'=1..d} 2 (n - d') / (n (n - 1)) = d (2n - d - 1) / (n (n - 1))
 */
class BackgroundCdf {
 public:
  explicit BackgroundCdf(std::size_t n);

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  /// B(d); 0 for d = 0 and 1 for d >= n - 1.
  [[nodiscard]] double operator()(std::size_t d) const noexcept;
  /// B(d) - B(d - 1).
  [[nodiscard]] double pmf(std::size_t d) const noexcept;

 private:
  std::size_t n_;
  double pair_count_;  // n (n - 1)
};

struct IndexDistanceStat {
  double t = 0.0;
  std::size_t argmax_d = 1;
};

[[nodiscard]] ForegroundSample foreground_distances(const KnnGraph& graph);
[[nodiscard]] BackgroundCdf background_cdf(std::size_t n);

/// T = max over d in 1..n-1 of |F_X(d) - B(d)|. The smallest maximizing d
/// is reported.
[[nodiscard]] IndexDistanceStat ks_statistic(const ForegroundSample& fg, const BackgroundCdf& bg);

/// Same statistic from a histogram: counts[d] is the number of foreground
/// values equal to d, counts.size() == bg.n().
[[nodiscard]] IndexDistanceStat ks_statistic_from_counts(std::span<const std::size_t> counts,
                                                         std::size_t total,
                                                         const BackgroundCdf& bg);

}  // namespace niid
