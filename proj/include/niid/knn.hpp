#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "niid/matrix.hpp"

namespace niid {

inline constexpr std::size_t kDefaultNeighbors = 10;

/**
 * Directed k-nearest-neighbor graph. neighbors(i) lists exactly k distinct
 * indices other than i, nearest first.
 */
class KnnGraph {
 public:
  /// `flat` holds n*k indices, row i at [i*k, (i+1)*k). Throws InvalidArgument
  /// when an invariant is violated.
  KnnGraph(std::size_t n, std::size_t k, std::vector<std::uint32_t> flat);

  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] std::size_t k() const noexcept { return k_; }
  [[nodiscard]] std::span<const std::uint32_t> neighbors(std::size_t i) const noexcept {
    return {flat_.data() + i * k_, k_};
  }

  friend bool operator==(const KnnGraph&, const KnnGraph&) = default;

 private:
  std::size_t n_;
  std::size_t k_;
  std::vector<std::uint32_t> flat_;
};

/// Euclidean: L2 norm of u - v. Cosine: 1 - u.v / (|u| |v|), clamped to [0, 2].
/// Throws InvalidArgument on length mismatch or a zero-norm vector under Cosine.
[[nodiscard]] double pairwise_distance(std::span<const double> u, std::span<const double> v,
                                       Metric metric);

/// Exact brute-force kNN. Ties in distance go to the smaller index.
/// The result does not depend on `threads` (0 = hardware concurrency).
[[nodiscard]] KnnGraph build_knn_graph(const FeatureMatrix& data, std::size_t k, Metric metric,
                                       unsigned threads = 0);

}  // namespace niid
