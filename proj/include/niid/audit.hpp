#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "niid/baselines.hpp"
#include "niid/knn.hpp"
#include "niid/matrix.hpp"
#include "niid/permute.hpp"
#include "niid/scores.hpp"

namespace niid {

enum class Method { Knn, Autocorr, Pca };

[[nodiscard]] Method parse_method(std::string_view name);
[[nodiscard]] std::string_view to_string(Method method) noexcept;

struct MethodOptions {
  std::size_t k = kDefaultNeighbors;
  Metric metric = Metric::Euclidean;
  std::size_t permutations = kDefaultPermutations;
  std::uint64_t seed = 0;
  LjungBoxConfig ljung_box;
  PcaDriftConfig pca;
  unsigned threads = 0;
};

/// Outcome of any of the three methods. `null` is empty for autocorr, which
/// has no permutation stage.
struct MethodResult {
  Method method = Method::Knn;
  double statistic = 0.0;
  double p_value = 1.0;
  std::optional<NullDistribution> null;
};

[[nodiscard]] MethodResult run_method(const FeatureMatrix& data, Method method,
                                      const MethodOptions& options);

struct AuditOptions {
  Method method = Method::Knn;
  MethodOptions method_options;
  bool compute_scores = false;
  std::size_t score_window = 0;  // 0 selects the default window
};

struct AuditReport {
  Method method = Method::Knn;
  MethodOptions parameters;
  std::size_t n = 0;
  std::size_t dims = 0;
  double statistic = 0.0;
  double p_value = 1.0;
  std::optional<NullDistribution> null;
  std::optional<std::size_t> argmax_d;
  std::optional<DatapointScores> scores;
  double duration_seconds = 0.0;
};

/// Runs the selected method and, when requested, per-datapoint scores.
/// Scores need the kNN graph and are only available for Method::Knn.
[[nodiscard]] AuditReport run_audit(const FeatureMatrix& data, const AuditOptions& options);

/// One JSON object. Identical inputs give identical text apart from
/// "duration_seconds".
[[nodiscard]] std::string report_to_json(const AuditReport& report);

/// "index,score,smoothed" header followed by one line per datapoint.
[[nodiscard]] std::string scores_to_csv(const DatapointScores& scores);

}  // namespace niid
