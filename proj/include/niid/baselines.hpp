#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "niid/matrix.hpp"
#include "niid/permute.hpp"

namespace niid {

struct LjungBoxConfig {
  std::size_t max_lag = 10;
};

struct PcaDriftConfig {
  std::size_t n_chunks = 10;
  std::size_t n_components = 1;
  std::size_t permutations = kDefaultPermutations;
};

/// Upper tail of the chi-squared distribution.
[[nodiscard]] double chi_squared_sf(double x, double dof);

/// Sample autocorrelations at lags 1..max_lag. Throws InvalidArgument for a
/// constant series.
[[nodiscard]] std::vector<double> autocorrelations(std::span<const double> series,
                                                   std::size_t max_lag);

/// Q_h = n (n + 2) sum_{l=1..h} rho_l^2 / (n - l) for h = 1..max_lag.
[[nodiscard]] std::vector<double> ljung_box_q(std::span<const double> series,
                                              std::size_t max_lag);

/// Mean of the chi-squared(h) upper-tail p-values of Q_h over every feature
/// column and every lag h in 1..max_lag.
[[nodiscard]] double ljung_box_pvalue(const FeatureMatrix& data, const LjungBoxConfig& cfg);

/// Mean over feature columns of Q at the largest lag.
[[nodiscard]] double ljung_box_statistic(const FeatureMatrix& data, const LjungBoxConfig& cfg);

/**
 * Drift statistic from PCA reconstruction error.
 *
 * Rows are split into n_chunks contiguous chunks. A q-component PCA is fit
 * on chunk 0 and every row's squared reconstruction error is computed. The
 * statistic is the largest absolute gap between a later chunk's mean error
 * and chunk 0's mean error.
 */
[[nodiscard]] double pca_drift_statistic(const FeatureMatrix& data, const PcaDriftConfig& cfg);

/// pca_drift_statistic on the data and on cfg.permutations row shuffles,
/// converted to a p-value with the same KDE survival evaluation as the kNN
/// test. Shuffle p uses Rng::for_stream(seed, p).
[[nodiscard]] TestResult pca_drift_test(const FeatureMatrix& data, const PcaDriftConfig& cfg,
                                        std::uint64_t seed, unsigned threads = 0);

[[nodiscard]] double pca_drift_pvalue(const FeatureMatrix& data, const PcaDriftConfig& cfg,
                                      std::uint64_t seed, unsigned threads = 0);

}  // namespace niid
