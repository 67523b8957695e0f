#include "niid/matrix.hpp"

#include <cmath>
#include <string>

#include "niid/errors.hpp"

namespace niid {

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows_ == 0) throw DataError("empty dataset");
  if (rows_ < 2) throw DataError("dataset needs at least 2 datapoints, got 1");
  if (cols_ == 0) throw DataError("datapoints need at least one feature");
  if (values_.size() != rows_ * cols_) {
    throw DataError("matrix holds " + std::to_string(values_.size()) + " values, expected " +
                    std::to_string(rows_ * cols_));
  }
  for (std::size_t idx = 0; idx < values_.size(); ++idx) {
    if (!std::isfinite(values_[idx])) {
      throw DataError("non-finite value at row " + std::to_string(idx / cols_) + ", column " +
                      std::to_string(idx % cols_));
    }
  }
}

FeatureMatrix FeatureMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw DataError("ragged rows: row " + std::to_string(i) + " has " +
                      std::to_string(rows[i].size()) + " values, expected " +
                      std::to_string(cols));
    }
    values.insert(values.end(), rows[i].begin(), rows[i].end());
  }
  return FeatureMatrix(rows.size(), cols, std::move(values));
}

FeatureMatrix FeatureMatrix::reordered(std::span<const std::size_t> order) const {
  if (order.size() != rows_) throw InvalidArgument("reorder length does not match row count");
  std::vector<double> out;
  out.reserve(values_.size());
  for (const std::size_t src : order) {
    if (src >= rows_) throw InvalidArgument("reorder index out of range");
    const auto r = row(src);
    out.insert(out.end(), r.begin(), r.end());
  }
  return FeatureMatrix(rows_, cols_, std::move(out));
}

Metric parse_metric(std::string_view name) {
  if (name == "euclidean") return Metric::Euclidean;
  if (name == "cosine") return Metric::Cosine;
  throw InvalidArgument("unknown metric '" + std::string(name) + "' (expected euclidean or cosine)");
}

std::string_view to_string(Metric metric) noexcept {
  return metric == Metric::Cosine ? "cosine" : "euclidean";
}

}  // namespace niid
