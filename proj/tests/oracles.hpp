#pragma once

// Independent reference computations for the test suites. Nothing here
// calls the code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "niid/knn.hpp"
#include "niid/matrix.hpp"
#include "niid/rng.hpp"

namespace oracle {

// Full N x N distance matrix, each row sorted by (distance, index).
inline std::vector<std::vector<std::size_t>> brute_force_knn(const niid::FeatureMatrix& data,
                                                             std::size_t k,
                                                             niid::Metric metric) {
  const std::size_t n = data.rows();
  std::vector<std::vector<double>> dist(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) dist[i][j] = niid::pairwise_distance(data.row(i), data.row(j), metric);
  }
  std::vector<std::vector<std::size_t>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> order;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) order.push_back(j);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return dist[i][a] < dist[i][b] || (dist[i][a] == dist[i][b] && a < b);
    });
    order.resize(k);
    out[i] = order;
  }
  return out;
}

inline std::vector<std::size_t> neighbors_of(const niid::KnnGraph& g, std::size_t i) {
  const auto nb = g.neighbors(i);
  return {nb.begin(), nb.end()};
}

// Fraction of the n(n-1)/2 unordered pairs with |i - j| <= d, d = 0..n-1.
inline std::vector<double> enumerate_background(std::size_t n) {
  std::vector<double> count(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) count[j - i] += 1.0;
  }
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  std::vector<double> cdf(n, 0.0);
  double running = 0.0;
  for (std::size_t d = 0; d < n; ++d) {
    running += count[d];
    cdf[d] = running / pairs;
  }
  return cdf;
}

// Fraction of the n - 1 partners j of i with |i - j| <= d, d = 0..n-1.
inline std::vector<double> enumerate_point_background(std::size_t i, std::size_t n) {
  std::vector<std::size_t> count(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    if (j != i) ++count[i > j ? i - j : j - i];
  }
  std::vector<double> cdf(n, 0.0);
  std::size_t running = 0;
  for (std::size_t d = 0; d < n; ++d) {
    running += count[d];
    cdf[d] = static_cast<double>(running) / static_cast<double>(n - 1);
  }
  return cdf;
}

inline std::vector<std::size_t> double_loop_foreground(const niid::KnnGraph& g) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t r = 0; r < g.k(); ++r) {
      const std::size_t j = g.neighbors(i)[r];
      out.push_back(i > j ? i - j : j - i);
    }
  }
  return out;
}

// KS gap of an empirical sample against a tabulated CDF, scanning every d in
// 1..n-1 and counting sample values by linear search.
inline double scan_ks(const std::vector<std::size_t>& sample, const std::vector<double>& cdf) {
  double best = 0.0;
  for (std::size_t d = 1; d < cdf.size(); ++d) {
    const auto le = std::count_if(sample.begin(), sample.end(), [&](std::size_t v) { return v <= d; });
    const double f = static_cast<double>(le) / static_cast<double>(sample.size());
    best = std::max(best, std::abs(f - cdf[d]));
  }
  return best;
}

// Moves datapoint i to position perm[i] and carries its neighbor list along.
inline niid::KnnGraph relabel(const niid::KnnGraph& g, const std::vector<std::size_t>& perm) {
  std::vector<std::uint32_t> flat(g.size() * g.k());
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t r = 0; r < g.k(); ++r) {
      flat[perm[i] * g.k() + r] = static_cast<std::uint32_t>(perm[g.neighbors(i)[r]]);
    }
  }
  return niid::KnnGraph(g.size(), g.k(), std::move(flat));
}

// Directed graph with k distinct random neighbors per node.
inline niid::KnnGraph random_graph(std::size_t n, std::size_t k, std::uint64_t seed) {
  niid::Rng rng(seed);
  std::vector<std::uint32_t> flat;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint32_t> others;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) others.push_back(static_cast<std::uint32_t>(j));
    }
    rng.shuffle(std::span<std::uint32_t>(others));
    flat.insert(flat.end(), others.begin(), others.begin() + static_cast<std::ptrdiff_t>(k));
  }
  return niid::KnnGraph(n, k, std::move(flat));
}

inline niid::FeatureMatrix random_matrix(std::size_t n, std::size_t f, std::uint64_t seed) {
  niid::Rng rng(seed);
  std::vector<double> v(n * f);
  for (double& x : v) x = rng.normal();
  return niid::FeatureMatrix(n, f, std::move(v));
}

// Plain permutation p-value (#{t_p >= t} + 1) / (P + 1).
inline double empirical_p_value(double t, const std::vector<double>& stats) {
  const auto ge = std::count_if(stats.begin(), stats.end(), [&](double s) { return s >= t; });
  return static_cast<double>(ge + 1) / static_cast<double>(stats.size() + 1);
}

// Sup distance between the empirical CDF of p-values and Uniform(0, 1).
inline double uniform_sup_distance(std::vector<double> p) {
  std::sort(p.begin(), p.end());
  const double n = static_cast<double>(p.size());
  double best = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    best = std::max({best, std::abs(p[i] - lo), std::abs(hi - p[i])});
  }
  return best;
}

}  // namespace oracle
