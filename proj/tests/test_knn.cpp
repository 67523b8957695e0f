#include <numeric>

#include "doctest.h"
#include "niid/errors.hpp"
#include "niid/knn.hpp"
#include "oracles.hpp"

using niid::FeatureMatrix;
using niid::Metric;

namespace {

void check_matches_oracle(const FeatureMatrix& data, std::size_t k, Metric metric) {
  const auto graph = niid::build_knn_graph(data, k, metric, 1);
  const auto expected = oracle::brute_force_knn(data, k, metric);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    REQUIRE(oracle::neighbors_of(graph, i) == expected[i]);
  }
}

}  // namespace

TEST_CASE("pairwise distance examples") {
  const std::vector<double> a{3, 4};
  CHECK(niid::pairwise_distance(a, a, Metric::Euclidean) == 0.0);
  CHECK(niid::pairwise_distance(a, std::vector<double>{0, 0}, Metric::Euclidean) == 5.0);
  CHECK(niid::pairwise_distance(std::vector<double>{1, 0}, std::vector<double>{0, 1},
                                Metric::Cosine) == 1.0);
  CHECK(niid::pairwise_distance(std::vector<double>{1, 0}, std::vector<double>{-1, 0},
                                Metric::Cosine) == 2.0);
  CHECK(niid::pairwise_distance(std::vector<double>{1, 1}, std::vector<double>{2, 2},
                                Metric::Cosine) == doctest::Approx(0.0));
  CHECK_THROWS_AS((void)niid::pairwise_distance(a, std::vector<double>{1}, Metric::Euclidean),
                  niid::InvalidArgument);
  CHECK_THROWS_AS((void)niid::pairwise_distance(a, std::vector<double>{0, 0}, Metric::Cosine),
                  niid::InvalidArgument);
}

TEST_CASE("pairwise distance is symmetric") {
  niid::Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> u(7), v(7);
    for (auto& x : u) x = rng.normal();
    for (auto& x : v) x = rng.normal();
    for (const Metric m : {Metric::Euclidean, Metric::Cosine}) {
      CHECK(niid::pairwise_distance(u, v, m) == niid::pairwise_distance(v, u, m));
      CHECK(niid::pairwise_distance(u, v, m) >= 0.0);
    }
  }
}

TEST_CASE("collinear points") {
  const auto data = FeatureMatrix::from_rows({{0}, {1}, {5}});
  const auto g = niid::build_knn_graph(data, 1, Metric::Euclidean);
  CHECK(oracle::neighbors_of(g, 0) == std::vector<std::size_t>{1});
  CHECK(oracle::neighbors_of(g, 1) == std::vector<std::size_t>{0});
  CHECK(oracle::neighbors_of(g, 2) == std::vector<std::size_t>{1});
}

TEST_CASE("k = N - 1 covers every other point") {
  const auto data = oracle::random_matrix(12, 3, 5);
  const auto g = niid::build_knn_graph(data, 11, Metric::Euclidean);
  for (std::size_t i = 0; i < 12; ++i) {
    auto nb = oracle::neighbors_of(g, i);
    std::sort(nb.begin(), nb.end());
    std::vector<std::size_t> expected;
    for (std::size_t j = 0; j < 12; ++j) {
      if (j != i) expected.push_back(j);
    }
    CHECK(nb == expected);
  }
}

TEST_CASE("200 random 2-D points match the distance-matrix oracle") {
  const auto data = oracle::random_matrix(200, 2, 11);
  check_matches_oracle(data, 10, Metric::Euclidean);
  check_matches_oracle(data, 10, Metric::Cosine);
}

TEST_CASE("oracle equivalence with ties and duplicates") {
  // Small integer grids create many exact distance ties.
  niid::Rng rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 2 + rng.below(150);
    const std::size_t f = 1 + rng.below(4);
    std::vector<double> v(n * f);
    for (auto& x : v) x = static_cast<double>(rng.below(4)) + 1.0;
    const FeatureMatrix data(n, f, v);
    const std::size_t k = 1 + rng.below(n - 1);
    check_matches_oracle(data, k, Metric::Euclidean);
    check_matches_oracle(data, k, Metric::Cosine);
  }
}

TEST_CASE("duplicates appear as zero-distance neighbors") {
  const auto data = FeatureMatrix::from_rows({{1, 1}, {5, 5}, {1, 1}, {9, 0}});
  const auto g = niid::build_knn_graph(data, 1, Metric::Euclidean);
  CHECK(g.neighbors(0)[0] == 2);
  CHECK(g.neighbors(2)[0] == 0);
}

TEST_CASE("result does not depend on thread count") {
  const auto data = oracle::random_matrix(700, 5, 23);
  const auto one = niid::build_knn_graph(data, 10, Metric::Euclidean, 1);
  CHECK(one == niid::build_knn_graph(data, 10, Metric::Euclidean, 3));
  CHECK(one == niid::build_knn_graph(data, 10, Metric::Euclidean, 8));
}

TEST_CASE("smaller k gives a prefix") {
  const auto data = oracle::random_matrix(150, 3, 29);
  const auto big = niid::build_knn_graph(data, 12, Metric::Euclidean);
  for (const std::size_t small_k : {1, 4, 11}) {
    const auto small = niid::build_knn_graph(data, small_k, Metric::Euclidean);
    for (std::size_t i = 0; i < data.rows(); ++i) {
      const auto s = small.neighbors(i);
      const auto b = big.neighbors(i);
      CHECK(std::equal(s.begin(), s.end(), b.begin()));
    }
  }
}

TEST_CASE("permutation equivariance") {
  const auto data = oracle::random_matrix(120, 4, 31);
  niid::Rng rng(37);
  const auto perm = niid::random_permutation(data.rows(), rng);  // i -> perm[i]
  std::vector<std::size_t> order(data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) order[perm[i]] = i;
  const auto moved = data.reordered(order);

  const auto g = niid::build_knn_graph(data, 8, Metric::Euclidean);
  const auto h = niid::build_knn_graph(moved, 8, Metric::Euclidean);
  CHECK(oracle::relabel(g, perm) == h);
}

TEST_CASE("build errors") {
  const auto data = oracle::random_matrix(5, 2, 1);
  CHECK_THROWS_WITH_AS((void)niid::build_knn_graph(data, 0, Metric::Euclidean),
                       doctest::Contains("[1, 4]"), niid::InvalidArgument);
  CHECK_THROWS_AS((void)niid::build_knn_graph(data, 5, Metric::Euclidean), niid::InvalidArgument);
  const auto zero = FeatureMatrix::from_rows({{1, 0}, {0, 0}, {0, 1}});
  CHECK_THROWS_WITH_AS((void)niid::build_knn_graph(zero, 1, Metric::Cosine),
                       doctest::Contains("zero norm"), niid::InvalidArgument);
  CHECK_NOTHROW((void)niid::build_knn_graph(zero, 1, Metric::Euclidean));
}

TEST_CASE("graph invariants are enforced") {
  CHECK_NOTHROW(niid::KnnGraph(3, 1, {1, 0, 1}));
  CHECK_THROWS_AS(niid::KnnGraph(3, 1, {0, 0, 1}), niid::InvalidArgument);     // self
  CHECK_THROWS_AS(niid::KnnGraph(3, 2, {1, 1, 0, 2, 0, 1}), niid::InvalidArgument);  // duplicate
  CHECK_THROWS_AS(niid::KnnGraph(3, 1, {1, 0, 7}), niid::InvalidArgument);     // range
  CHECK_THROWS_AS(niid::KnnGraph(3, 3, std::vector<std::uint32_t>(9, 0)), niid::InvalidArgument);
  CHECK_THROWS_AS(niid::KnnGraph(3, 1, {1, 0}), niid::InvalidArgument);
}
