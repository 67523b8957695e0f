#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "niid/knn.hpp"
#include "niid/kstat.hpp"

namespace niid {

inline constexpr std::size_t kDefaultPermutations = 25;

/// Statistics computed under random reorderings plus the Gaussian KDE
/// bandwidth used to smooth them.
struct NullDistribution {
  std::vector<double> stats;
  double bandwidth = 0.0;
};

struct TestResult {
  double t_observed = 0.0;
  double p_value = 1.0;
  NullDistribution null;
  std::uint64_t seed = 0;
};

/**
 * Silverman's rule of thumb: 0.9 * min(sd, IQR / 1.34) * P^(-1/5).
 *
 * sd is the sample standard deviation and IQR uses linearly interpolated
 * quantiles. When the min is zero but sd is not, sd is used alone. The
 * result is floored at 1e-6.
 */
[[nodiscard]] double silverman_bandwidth(std::span<const double> sample);

/// Validates the sample (P >= 2, finite values, in [0, 1] unless
/// `unit_interval` is false) and attaches its bandwidth.
[[nodiscard]] NullDistribution make_null_distribution(std::vector<double> stats,
                                                      bool unit_interval = true);

/// KS statistic of the foreground {|pi(i) - pi(j)| : j in K_i} against the
/// background of the same size. The graph is not rebuilt.
[[nodiscard]] IndexDistanceStat permuted_statistic(const KnnGraph& graph,
                                                   std::span<const std::size_t> permutation);

/// p_count permuted statistics. Permutation p is drawn by Fisher-Yates from
/// Rng::for_stream(seed, p), so the result is independent of `threads`.
[[nodiscard]] NullDistribution null_distribution(const KnnGraph& graph, std::size_t p_count,
                                                 std::uint64_t seed, unsigned threads = 0);

/// (1/P) sum_p S((t - t_p) / h) with S the standard normal survival function.
[[nodiscard]] double kde_p_value(double t_observed, const NullDistribution& null);

/// Observed statistic, its null and the smoothed right-tail p-value.
[[nodiscard]] TestResult knn_permutation_test(const KnnGraph& graph, std::size_t p_count,
                                              std::uint64_t seed, unsigned threads = 0);

}  // namespace niid
