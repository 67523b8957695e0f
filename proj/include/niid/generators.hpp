#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "niid/matrix.hpp"
#include "niid/rng.hpp"

namespace niid {

enum class ScenarioKind {
  IidMixture,
  MeanShift,
  VarianceChangepoint,
  ArDependent,
  SortedClasses,
  ClassDrift,
  ContiguousBlock,
};

[[nodiscard]] ScenarioKind parse_scenario_kind(std::string_view name);
[[nodiscard]] std::string_view to_string(ScenarioKind kind) noexcept;

/// Parameters for every synthetic scenario. Fields that do not apply to
/// `kind` are ignored.
struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::IidMixture;
  std::size_t n = 1000;
  std::size_t dims = 2;
  std::uint64_t seed = 0;

  // Gaussian mixture scenarios.
  std::size_t components = 10;
  double total_shift = 2.0;
  double variance_factor = 1.5;
  double changepoint_fraction = 0.5;

  // Autoregressive scenario; coefficients must sum to zero.
  std::array<double, 3> ar_coefficients{0.5, 0.4, -0.9};

  // Class-cluster (embedding stand-in) scenarios.
  std::size_t classes = 10;
  double class_separation = 4.0;  // RMS per-dimension gap between class means, in intra-class sds
  double drift_decay = 0.7;       // final class weights proportional to decay^c
  std::size_t block_len = 250;
  std::size_t block_class = 0;
};

/// Defaults for `kind`: 1000 x 2 for the Gaussian scenarios, 10000 x 64 for
/// sorted_classes, 5000 x 64 for class_drift and 2500 x 64 for contiguous_block.
[[nodiscard]] ScenarioSpec default_spec(ScenarioKind kind);

/// Throws InvalidArgument when the spec is out of range.
void validate(const ScenarioSpec& spec);

/// Mixture of equally weighted isotropic Gaussians.
struct MixtureModel {
  std::vector<std::vector<double>> means;
  std::vector<double> stds;

  /// Means uniform on [0, 10]^dims, stds uniform on [0, 1).
  static MixtureModel draw(std::size_t components, std::size_t dims, Rng& rng);
};

[[nodiscard]] FeatureMatrix gen_iid_mixture(const ScenarioSpec& spec);
[[nodiscard]] FeatureMatrix gen_mean_shift(const ScenarioSpec& spec);
[[nodiscard]] FeatureMatrix gen_variance_changepoint(const ScenarioSpec& spec);
[[nodiscard]] FeatureMatrix gen_ar_dependent(const ScenarioSpec& spec);
[[nodiscard]] FeatureMatrix gen_embedding_scenario(const ScenarioSpec& spec);

/// Dispatches on spec.kind.
[[nodiscard]] FeatureMatrix generate(const ScenarioSpec& spec);

/// Class label of every row of gen_embedding_scenario(spec), in order.
[[nodiscard]] std::vector<std::size_t> embedding_labels(const ScenarioSpec& spec);

/// Rows reordered by a uniformly random permutation drawn from `seed`.
[[nodiscard]] FeatureMatrix shuffle(const FeatureMatrix& data, std::uint64_t seed);

}  // namespace niid
