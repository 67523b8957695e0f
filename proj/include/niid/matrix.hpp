#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace niid {

/**
 * N datapoints in collection order, each a feature vector of length F.
 *
 * Storage is row-major and contiguous. Every instance holds at least two
 * rows, at least one column, and only finite values.
 */
class FeatureMatrix {
 public:
  FeatureMatrix() = default;

  /// Throws DataError when the shape is degenerate or a value is not finite.
  FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static FeatureMatrix from_rows(const std::vector<std::vector<double>>& rows);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

  [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * cols_, cols_};
  }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept {
    return values_[i * cols_ + j];
  }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

  /// Row p of the result is row order[p] of this matrix.
  [[nodiscard]] FeatureMatrix reordered(std::span<const std::size_t> order) const;

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

enum class Metric { Euclidean, Cosine };

[[nodiscard]] Metric parse_metric(std::string_view name);
[[nodiscard]] std::string_view to_string(Metric metric) noexcept;

}  // namespace niid
