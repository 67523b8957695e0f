#include "niid/kstat.hpp"

#include <cmath>
#include <string>

#include "niid/errors.hpp"

namespace niid {

BackgroundCdf::BackgroundCdf(std::size_t n) : n_(n) {
  if (n < 2) throw InvalidArgument("background CDF needs n >= 2, got " + std::to_string(n));
  pair_count_ = static_cast<double>(n) * static_cast<double>(n - 1);
}

double BackgroundCdf::operator()(std::size_t d) const noexcept {
  if (d == 0) return 0.0;
  if (d >= n_ - 1) return 1.0;
  const double numerator = static_cast<double>(d) * static_cast<double>(2 * n_ - d - 1);
  return numerator / pair_count_;
}

double BackgroundCdf::pmf(std::size_t d) const noexcept {
  if (d == 0 || d >= n_) return 0.0;
  return 2.0 * static_cast<double>(n_ - d) / pair_count_;
}

ForegroundSample foreground_distances(const KnnGraph& graph) {
  ForegroundSample fg;
  fg.values.reserve(graph.size() * graph.k());
  for (std::size_t i = 0; i < graph.size(); ++i) {
    for (const std::uint32_t j : graph.neighbors(i)) {
      fg.values.push_back(i > j ? i - j : j - i);
    }
  }
  return fg;
}

BackgroundCdf background_cdf(std::size_t n) { return BackgroundCdf(n); }

IndexDistanceStat ks_statistic_from_counts(std::span<const std::size_t> counts,
                                           std::size_t total, const BackgroundCdf& bg) {
  if (total == 0) throw InvalidArgument("foreground sample is empty");
  if (counts.size() != bg.n()) throw InvalidArgument("histogram length must equal n");
  const double size = static_cast<double>(total);
  std::size_t cumulative = counts[0];
  IndexDistanceStat best{-1.0, 1};
  for (std::size_t d = 1; d < bg.n(); ++d) {
    cumulative += counts[d];
    const double gap = std::abs(static_cast<double>(cumulative) / size - bg(d));
    if (gap > best.t) best = {gap, d};
  }
  return best;
}

IndexDistanceStat ks_statistic(const ForegroundSample& fg, const BackgroundCdf& bg) {
  if (fg.values.empty()) throw InvalidArgument("foreground sample is empty");
  std::vector<std::size_t> counts(bg.n(), 0);
  for (const std::size_t d : fg.values) {
    if (d == 0 || d >= bg.n()) {
      throw InvalidArgument("foreground index distance " + std::to_string(d) +
                            " outside 1.." + std::to_string(bg.n() - 1));
    }
    ++counts[d];
  }
  return ks_statistic_from_counts(counts, fg.values.size(), bg);
}

}  // namespace niid
