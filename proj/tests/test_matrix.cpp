#include <cmath>
#include <limits>

#include "doctest.h"
#include "niid/errors.hpp"
#include "niid/matrix.hpp"
#include "niid/rng.hpp"

using niid::FeatureMatrix;

TEST_CASE("matrix shape and access") {
  const auto m = FeatureMatrix::from_rows({{1, 2}, {3, 4}, {5, 6}});
  CHECK(m.rows() == 3);
  CHECK(m.cols() == 2);
  CHECK(m(1, 0) == 3);
  CHECK(m.row(2)[1] == 6);
}

TEST_CASE("matrix rejects degenerate input") {
  CHECK_THROWS_WITH_AS(FeatureMatrix(0, 2, {}), "empty dataset", niid::DataError);
  CHECK_THROWS_AS(FeatureMatrix(1, 2, {1, 2}), niid::DataError);
  CHECK_THROWS_AS(FeatureMatrix(2, 0, {}), niid::DataError);
  CHECK_THROWS_AS(FeatureMatrix(2, 2, {1, 2, 3}), niid::DataError);
  CHECK_THROWS_AS(FeatureMatrix(2, 1, {1, std::nan("")}), niid::DataError);
  CHECK_THROWS_AS(FeatureMatrix(2, 1, {1, std::numeric_limits<double>::infinity()}),
                  niid::DataError);
  CHECK_THROWS_AS(FeatureMatrix::from_rows({{1, 2}, {3}}), niid::DataError);
}

TEST_CASE("reordered moves rows") {
  const auto m = FeatureMatrix::from_rows({{0}, {1}, {2}});
  const std::vector<std::size_t> order{2, 0, 1};
  const auto r = m.reordered(order);
  CHECK(r(0, 0) == 2);
  CHECK(r(1, 0) == 0);
  CHECK(r(2, 0) == 1);
  const std::vector<std::size_t> bad{0, 3, 1};
  CHECK_THROWS_AS((void)m.reordered(bad), niid::InvalidArgument);
}

TEST_CASE("metric names") {
  CHECK(niid::parse_metric("cosine") == niid::Metric::Cosine);
  CHECK(niid::to_string(niid::Metric::Euclidean) == "euclidean");
  CHECK_THROWS_AS((void)niid::parse_metric("manhattan"), niid::InvalidArgument);
}

TEST_CASE("rng streams are reproducible and bounded") {
  niid::Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  niid::Rng c = niid::Rng::for_stream(7, 3);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(c.below(5) < 5);
  }
  // Normal draws: mean near 0, variance near 1.
  niid::Rng d(1);
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double z = d.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.03);
  CHECK(std::abs(sq / n - 1.0) < 0.05);

  niid::Rng e(9);
  const auto perm = niid::random_permutation(50, e);
  std::vector<bool> hit(50, false);
  for (auto p : perm) hit[p] = true;
  CHECK(std::all_of(hit.begin(), hit.end(), [](bool h) { return h; }));
}
