#include "niid/scores.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "niid/errors.hpp"
#include "niid/parallel.hpp"

namespace niid {

PerPointBackground::PerPointBackground(std::size_t i, std::size_t n) : i_(i), n_(n) {
  if (n < 2) throw InvalidArgument("per-point background needs n >= 2");
  if (i >= n) {
    throw InvalidArgument("index " + std::to_string(i) + " out of range for n = " +
                          std::to_string(n));
  }
  r_ = std::min(i, n - 1 - i);
}

double PerPointBackground::operator()(std::size_t d) const noexcept {
  // Number of positions j != i with |i - j| <= d, over n - 1.
  const std::size_t below = std::min(d, i_);
  const std::size_t above = std::min(d, n_ - 1 - i_);
  return static_cast<double>(below + above) / static_cast<double>(n_ - 1);
}

PerPointBackground per_point_background(std::size_t i, std::size_t n) {
  return PerPointBackground(i, n);
}

std::size_t default_smoothing_window(std::size_t n) noexcept {
  auto window = static_cast<std::size_t>(std::llround(static_cast<double>(n) / 50.0));
  window = std::max<std::size_t>(3, window);
  if (window % 2 == 0) ++window;
  return window;
}

double point_statistic(const KnnGraph& graph, std::size_t i) {
  const std::size_t n = graph.size();
  const std::size_t k = graph.k();
  const PerPointBackground bg(i, n);

  std::vector<std::size_t> dist;
  dist.reserve(k);
  for (const std::uint32_t j : graph.neighbors(i)) dist.push_back(i > j ? i - j : j - i);
  std::sort(dist.begin(), dist.end());

  // The empirical CDF is constant between consecutive distinct distances and
  // B_i is nondecreasing, so the largest gap on each constant stretch sits at
  // one of its two ends.
  double best = 0.0;
  auto consider = [&](std::size_t lo, std::size_t hi, double f) {
    if (lo > hi) return;
    best = std::max({best, std::abs(f - bg(lo)), std::abs(f - bg(hi))});
  };
  const double kd = static_cast<double>(k);
  consider(1, dist.front() - 1, 0.0);
  std::size_t pos = 0;
  while (pos < k) {
    const std::size_t value = dist[pos];
    while (pos < k && dist[pos] == value) ++pos;
    const std::size_t stretch_end = pos < k ? dist[pos] - 1 : n - 1;
    consider(value, stretch_end, static_cast<double>(pos) / kd);
  }
  return best;
}

DatapointScores datapoint_scores(const KnnGraph& graph, std::size_t window, unsigned threads) {
  const std::size_t n = graph.size();
  DatapointScores out;
  out.window = window == 0 ? default_smoothing_window(n) : window;
  if (out.window % 2 == 0) {
    throw InvalidArgument("smoothing window must be odd, got " + std::to_string(out.window));
  }
  out.raw_stats.resize(n);
  parallel_for(n, threads, [&](std::size_t i) { out.raw_stats[i] = point_statistic(graph, i); });
  out.scores.resize(n);
  std::transform(out.raw_stats.begin(), out.raw_stats.end(), out.scores.begin(),
                 [](double t) { return 1.0 - t; });
  out.smoothed = smooth_scores(out.scores, out.window);
  return out;
}

std::vector<double> smooth_scores(std::span<const double> scores, std::size_t window) {
  if (window == 0 || window % 2 == 0) {
    throw InvalidArgument("smoothing window must be a positive odd number, got " +
                          std::to_string(window));
  }
  const std::size_t n = scores.size();
  const std::size_t half = window / 2;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + half);
    // Summing deviations from the first value keeps constant runs exact.
    const double anchor = scores[lo];
    double deviation = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) deviation += scores[j] - anchor;
    out[i] = anchor + deviation / static_cast<double>(hi - lo + 1);
  }
  return out;
}

}  // namespace niid
