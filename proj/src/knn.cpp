#include "niid/knn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "niid/errors.hpp"
#include "niid/parallel.hpp"

namespace niid {
namespace {

constexpr std::size_t kTile = 64;

// Four interleaved accumulators, combined pairwise. Every distance in the
// library goes through these two kernels so the graph agrees exactly with
// pairwise_distance.
double dot(const double* a, const double* b, std::size_t n) noexcept {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t t = 0;
  for (; t + 4 <= n; t += 4) {
    for (std::size_t l = 0; l < 4; ++l) acc[l] += a[t + l] * b[t + l];
  }
  double sum = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  for (; t < n; ++t) sum += a[t] * b[t];
  return sum;
}

double squared_l2(const double* a, const double* b, std::size_t n) noexcept {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t t = 0;
  for (; t + 4 <= n; t += 4) {
    for (std::size_t l = 0; l < 4; ++l) {
      const double diff = a[t + l] - b[t + l];
      acc[l] += diff * diff;
    }
  }
  double sum = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  for (; t < n; ++t) {
    const double diff = a[t] - b[t];
    sum += diff * diff;
  }
  return sum;
}

double cosine_from_parts(double uv, double norm_u, double norm_v) noexcept {
  return std::clamp(1.0 - uv / (norm_u * norm_v), 0.0, 2.0);
}

struct Candidate {
  double dist;
  std::uint32_t index;
};

bool closer(const Candidate& a, const Candidate& b) noexcept {
  return a.dist < b.dist || (a.dist == b.dist && a.index < b.index);
}

// Bounded sorted candidate lists for every row.
class TopK {
 public:
  TopK(std::size_t n, std::size_t k) : k_(k), slots_(n * k), counts_(n, 0) {}

  void offer(std::size_t row, Candidate c) noexcept {
    Candidate* base = slots_.data() + row * k_;
    std::size_t& count = counts_[row];
    std::size_t pos;
    if (count == k_) {
      if (!closer(c, base[k_ - 1])) return;
      pos = k_ - 1;
    } else {
      pos = count++;
    }
    while (pos > 0 && closer(c, base[pos - 1])) {
      base[pos] = base[pos - 1];
      --pos;
    }
    base[pos] = c;
  }

  [[nodiscard]] std::span<const Candidate> row(std::size_t i) const noexcept {
    return {slots_.data() + i * k_, counts_[i]};
  }

 private:
  std::size_t k_;
  std::vector<Candidate> slots_;
  std::vector<std::size_t> counts_;
};

class Distances {
 public:
  Distances(const FeatureMatrix& data, Metric metric) : data_(data), metric_(metric) {
    if (metric_ == Metric::Cosine) {
      norms_.resize(data.rows());
      for (std::size_t i = 0; i < data.rows(); ++i) {
        const auto r = data.row(i);
        norms_[i] = std::sqrt(dot(r.data(), r.data(), r.size()));
        if (norms_[i] == 0.0) {
          throw InvalidArgument("cosine distance undefined: row " + std::to_string(i) +
                                " has zero norm");
        }
      }
    }
  }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    const double* a = data_.row(i).data();
    const double* b = data_.row(j).data();
    if (metric_ == Metric::Euclidean) return std::sqrt(squared_l2(a, b, data_.cols()));
    return cosine_from_parts(dot(a, b, data_.cols()), norms_[i], norms_[j]);
  }

 private:
  const FeatureMatrix& data_;
  Metric metric_;
  std::vector<double> norms_;
};

}  // namespace

KnnGraph::KnnGraph(std::size_t n, std::size_t k, std::vector<std::uint32_t> flat)
    : n_(n), k_(k), flat_(std::move(flat)) {
  if (n_ < 2) throw InvalidArgument("graph needs at least 2 nodes");
  if (k_ < 1 || k_ > n_ - 1) {
    throw InvalidArgument("k must be in [1, " + std::to_string(n_ - 1) + "], got " +
                          std::to_string(k_));
  }
  if (flat_.size() != n_ * k_) throw InvalidArgument("neighbor list size is not n*k");
  std::vector<std::size_t> seen(n_, n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (const std::uint32_t j : neighbors(i)) {
      if (j >= n_) throw InvalidArgument("neighbor index out of range at node " + std::to_string(i));
      if (j == i) throw InvalidArgument("node " + std::to_string(i) + " lists itself as a neighbor");
      if (seen[j] == i) throw InvalidArgument("duplicate neighbor at node " + std::to_string(i));
      seen[j] = i;
    }
  }
}

double pairwise_distance(std::span<const double> u, std::span<const double> v, Metric metric) {
  if (u.size() != v.size()) {
    throw InvalidArgument("vector lengths differ: " + std::to_string(u.size()) + " vs " +
                          std::to_string(v.size()));
  }
  if (metric == Metric::Euclidean) return std::sqrt(squared_l2(u.data(), v.data(), u.size()));
  const double norm_u = std::sqrt(dot(u.data(), u.data(), u.size()));
  const double norm_v = std::sqrt(dot(v.data(), v.data(), v.size()));
  if (norm_u == 0.0 || norm_v == 0.0) {
    throw InvalidArgument("cosine distance undefined for a zero-norm vector");
  }
  return cosine_from_parts(dot(u.data(), v.data(), u.size()), norm_u, norm_v);
}

KnnGraph build_knn_graph(const FeatureMatrix& data, std::size_t k, Metric metric,
                         unsigned threads) {
  const std::size_t n = data.rows();
  if (n < 2) throw InvalidArgument("kNN graph needs at least 2 datapoints");
  if (k < 1 || k > n - 1) {
    throw InvalidArgument("k must be in [1, " + std::to_string(n - 1) + "] for " +
                          std::to_string(n) + " datapoints, got " + std::to_string(k));
  }
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidArgument("dataset too large for 32-bit neighbor indices");
  }
  const Distances distance(data, metric);

  // Each unordered pair is evaluated once, inside one tile pair (I <= J),
  // and offered to both endpoints. Workers own disjoint tile pairs and keep
  // private candidate lists; the exact top-k under the (distance, index)
  // order is recovered by merging, so the result is independent of the
  // worker count.
  const std::size_t tiles = (n + kTile - 1) / kTile;
  std::vector<std::pair<std::size_t, std::size_t>> tile_pairs;
  tile_pairs.reserve(tiles * (tiles + 1) / 2);
  for (std::size_t a = 0; a < tiles; ++a) {
    for (std::size_t b = a; b < tiles; ++b) tile_pairs.emplace_back(a, b);
  }

  const std::size_t workers = std::min<std::size_t>(resolve_threads(threads), tile_pairs.size());
  std::vector<TopK> partial(workers, TopK(n, k));
  parallel_for(workers, static_cast<unsigned>(workers), [&](std::size_t w) {
    TopK& top = partial[w];
    for (std::size_t p = w; p < tile_pairs.size(); p += workers) {
      const auto [a, b] = tile_pairs[p];
      const std::size_t a_end = std::min(n, (a + 1) * kTile);
      const std::size_t b_end = std::min(n, (b + 1) * kTile);
      for (std::size_t i = a * kTile; i < a_end; ++i) {
        const std::size_t j_begin = (a == b) ? i + 1 : b * kTile;
        for (std::size_t j = j_begin; j < b_end; ++j) {
          const double d = distance(i, j);
          top.offer(i, {d, static_cast<std::uint32_t>(j)});
          top.offer(j, {d, static_cast<std::uint32_t>(i)});
        }
      }
    }
  });

  std::vector<std::uint32_t> flat(n * k);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = partial.front().row(i);
      for (std::size_t r = 0; r < k; ++r) flat[i * k + r] = row[r].index;
    }
  } else {
    TopK merged(n, k);
    for (std::size_t i = 0; i < n; ++i) {
      for (const TopK& top : partial) {
        for (const Candidate& c : top.row(i)) merged.offer(i, c);
      }
      const auto row = merged.row(i);
      for (std::size_t r = 0; r < k; ++r) flat[i * k + r] = row[r].index;
    }
  }
  return KnnGraph(n, k, std::move(flat));
}

}  // namespace niid
