#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "niid/knn.hpp"

namespace niid {

/**
 * CDF of |i - j| over every j != i in a dataset of size n. With
 * r = min(i, n - 1 - i) it rises with slope 2/(n-1) up to r, with slope
 * 1/(n-1) up to n - 1 - r, and is 1 beyond.
 */
class PerPointBackground {
 public:
  PerPointBackground(std::size_t i, std::size_t n);

  [[nodiscard]] std::size_t index() const noexcept { return i_; }
  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] std::size_t r() const noexcept { return r_; }
  [[nodiscard]] double operator()(std::size_t d) const noexcept;

 private:
  std::size_t i_;
  std::size_t n_;
  std::size_t r_;
};

[[nodiscard]] PerPointBackground per_point_background(std::size_t i, std::size_t n);

struct DatapointScores {
  std::vector<double> raw_stats;  // T_i
  std::vector<double> scores;     // 1 - T_i; near 0 flags an anomalous datapoint
  std::vector<double> smoothed;
  std::size_t window = 1;
};

/// max(3, round(n / 50)), bumped to the next odd number.
[[nodiscard]] std::size_t default_smoothing_window(std::size_t n) noexcept;

/// Restricted KS statistic of one datapoint's neighbor index distances
/// against its own background, evaluated over d in 1..n-1.
[[nodiscard]] double point_statistic(const KnnGraph& graph, std::size_t i);

/// window == 0 selects default_smoothing_window(n).
[[nodiscard]] DatapointScores datapoint_scores(const KnnGraph& graph, std::size_t window = 0,
                                               unsigned threads = 0);

/// Centered moving average; windows are truncated at the sequence ends.
/// window must be odd and positive.
[[nodiscard]] std::vector<double> smooth_scores(std::span<const double> scores,
                                                std::size_t window);

}  // namespace niid
