#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "niid/audit.hpp"
#include "niid/generators.hpp"

namespace niid {

inline constexpr std::size_t kDefaultReplicates = 50;
inline constexpr std::size_t kDefaultHistogramBins = 20;
inline constexpr std::uint64_t kPermutationSeedOffset = 1'000'000;
inline constexpr std::uint64_t kShuffleSeedOffset = 2'000'000;

enum class Variant { AsIs, Shuffled };

[[nodiscard]] std::string_view to_string(Variant variant) noexcept;

/**
 * Replicate r generates its data with seed base_seed + r, shuffles the twin
 * with base_seed + 2e6 + r and seeds every permutation stage with
 * base_seed + 1e6 + r. The seed stored in each scenario is ignored.
 */
struct BenchmarkPlan {
  std::vector<ScenarioSpec> scenarios;
  std::vector<Method> methods;
  std::size_t replicates = kDefaultReplicates;
  bool include_shuffled_twin = true;
  std::uint64_t base_seed = 0;
  MethodOptions method_options;
  std::size_t bins = kDefaultHistogramBins;
  unsigned threads = 0;
};

struct BenchmarkCell {
  std::size_t scenario_index = 0;
  ScenarioKind scenario = ScenarioKind::IidMixture;
  Method method = Method::Knn;
  Variant variant = Variant::AsIs;
  std::vector<double> p_values;
  std::vector<std::size_t> histogram;
  double fraction_below_005 = 0.0;
  double median = 0.0;
};

struct BenchmarkResult {
  BenchmarkPlan plan;
  std::vector<BenchmarkCell> cells;  // scenario-major, then method, then variant
};

/// mean_shift, variance_changepoint and ar_dependent at 1000 x 2 against
/// knn, autocorr and pca, 50 replicates with shuffled twins.
[[nodiscard]] BenchmarkPlan paper_gaussian_plan();

void validate(const BenchmarkPlan& plan);

[[nodiscard]] BenchmarkResult run_benchmark(const BenchmarkPlan& plan);

/// Equal-width bins on [0, 1]; the last bin includes 1.
[[nodiscard]] std::vector<std::size_t> histogram(std::span<const double> values,
                                                 std::size_t bins);

[[nodiscard]] double median(std::span<const double> values);

[[nodiscard]] std::string plan_to_json(const BenchmarkPlan& plan);
/// Missing keys keep paper_gaussian_plan() values. Throws InvalidArgument on
/// malformed input.
[[nodiscard]] BenchmarkPlan plan_from_json(std::string_view text);
[[nodiscard]] std::string result_to_json(const BenchmarkResult& result);

}  // namespace niid
