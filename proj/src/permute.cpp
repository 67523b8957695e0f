#include "niid/permute.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "niid/errors.hpp"
#include "niid/parallel.hpp"
#include "niid/rng.hpp"

namespace niid {
namespace {

// Linear interpolation between order statistics of a sorted sample.
double quantile_sorted(std::span<const double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double normal_survival(double z) noexcept { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

IndexDistanceStat statistic_under(const KnnGraph& graph, std::span<const std::size_t> position,
                                  const BackgroundCdf& bg, std::vector<std::size_t>& counts) {
  std::fill(counts.begin(), counts.end(), 0);
  for (std::size_t i = 0; i < graph.size(); ++i) {
    const std::size_t pi = position[i];
    for (const std::uint32_t j : graph.neighbors(i)) {
      const std::size_t pj = position[j];
      ++counts[pi > pj ? pi - pj : pj - pi];
    }
  }
  return ks_statistic_from_counts(counts, graph.size() * graph.k(), bg);
}

}  // namespace

double silverman_bandwidth(std::span<const double> sample) {
  constexpr double kFloor = 1e-6;
  if (sample.size() < 2) throw InvalidArgument("bandwidth needs at least 2 values");
  const double count = static_cast<double>(sample.size());
  const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / count;
  double ss = 0.0;
  for (const double x : sample) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (count - 1.0));

  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);

  double spread = std::min(sd, iqr / 1.34);
  if (spread <= 0.0) spread = sd;
  return std::max(kFloor, 0.9 * spread * std::pow(count, -0.2));
}

NullDistribution make_null_distribution(std::vector<double> stats, bool unit_interval) {
  if (stats.size() < 2) {
    throw InvalidArgument("null distribution needs at least 2 statistics, got " +
                          std::to_string(stats.size()));
  }
  for (const double t : stats) {
    if (!std::isfinite(t)) throw InvalidArgument("null statistic is not finite");
    if (unit_interval && !(t >= 0.0 && t <= 1.0)) {
      throw InvalidArgument("null statistic outside [0, 1]");
    }
  }
  NullDistribution null;
  null.bandwidth = silverman_bandwidth(stats);
  null.stats = std::move(stats);
  return null;
}

IndexDistanceStat permuted_statistic(const KnnGraph& graph,
                                     std::span<const std::size_t> permutation) {
  const std::size_t n = graph.size();
  if (permutation.size() != n) throw InvalidArgument("permutation length must equal n");
  std::vector<bool> hit(n, false);
  for (const std::size_t p : permutation) {
    if (p >= n || hit[p]) throw InvalidArgument("permutation is not a bijection on 0..n-1");
    hit[p] = true;
  }
  std::vector<std::size_t> counts(n);
  return statistic_under(graph, permutation, BackgroundCdf(n), counts);
}

NullDistribution null_distribution(const KnnGraph& graph, std::size_t p_count,
                                   std::uint64_t seed, unsigned threads) {
  if (p_count < 2) {
    throw InvalidArgument("permutation count must be at least 2, got " + std::to_string(p_count));
  }
  const std::size_t n = graph.size();
  const BackgroundCdf bg(n);
  std::vector<double> stats(p_count);
  parallel_for(p_count, threads, [&](std::size_t p) {
    Rng rng = Rng::for_stream(seed, p);
    const auto perm = random_permutation(n, rng);
    std::vector<std::size_t> counts(n);
    stats[p] = statistic_under(graph, perm, bg, counts).t;
  });
  return make_null_distribution(std::move(stats));
}

double kde_p_value(double t_observed, const NullDistribution& null) {
  double mass = 0.0;
  for (const double t : null.stats) mass += normal_survival((t_observed - t) / null.bandwidth);
  return std::clamp(mass / static_cast<double>(null.stats.size()), 0.0, 1.0);
}

TestResult knn_permutation_test(const KnnGraph& graph, std::size_t p_count, std::uint64_t seed,
                                unsigned threads) {
  TestResult result;
  result.seed = seed;
  result.t_observed = ks_statistic(foreground_distances(graph), BackgroundCdf(graph.size())).t;
  result.null = null_distribution(graph, p_count, seed, threads);
  result.p_value = kde_p_value(result.t_observed, result.null);
  return result;
}

}  // namespace niid
