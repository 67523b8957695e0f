#include <algorithm>

#include "doctest.h"
#include "json.hpp"
#include "niid/audit.hpp"
#include "niid/errors.hpp"
#include "niid/generators.hpp"

using nlohmann::json;

namespace {

niid::FeatureMatrix shifted() {
  return niid::generate(niid::default_spec(niid::ScenarioKind::MeanShift));
}

std::string without_duration(std::string text) {
  auto j = json::parse(text);
  j.erase("duration_seconds");
  return j.dump();
}

}  // namespace

TEST_CASE("method names") {
  CHECK(niid::parse_method("knn") == niid::Method::Knn);
  CHECK(niid::parse_method("autocorr") == niid::Method::Autocorr);
  CHECK(niid::parse_method("pca") == niid::Method::Pca);
  CHECK(niid::to_string(niid::Method::Pca) == "pca");
  CHECK_THROWS_AS((void)niid::parse_method("ks"), niid::InvalidArgument);
}

TEST_CASE("knn audit report") {
  niid::AuditOptions options;
  options.compute_scores = true;
  const auto data = shifted();
  const auto report = niid::run_audit(data, options);
  CHECK(report.n == 1000);
  CHECK(report.dims == 2);
  CHECK(report.p_value < 0.01);
  REQUIRE(report.null.has_value());
  CHECK(report.null->stats.size() == 25);
  REQUIRE(report.argmax_d.has_value());
  REQUIRE(report.scores.has_value());
  CHECK(report.scores->window == 21);
  CHECK(report.duration_seconds >= 0.0);

  const auto j = json::parse(niid::report_to_json(report));
  std::vector<std::string> keys;
  for (const auto& item : j.items()) keys.push_back(item.key());
  // nlohmann::json sorts keys, so compare as a set.
  std::sort(keys.begin(), keys.end());
  CHECK(keys == std::vector<std::string>{"argmax_d", "dims", "duration_seconds", "method", "n",
                                         "null", "p_value", "parameters", "scores", "statistic"});
  CHECK(j["parameters"]["k"] == 10);
  CHECK(j["parameters"]["metric"] == "euclidean");
  CHECK(j["scores"]["smoothed"].size() == 1000);

  const auto text = niid::report_to_json(report);
  CHECK(text.find("\"method\"") < text.find("\"parameters\""));
  CHECK(text.find("\"p_value\"") < text.find("\"duration_seconds\""));
  CHECK(text.back() == '\n');

  const auto again = niid::run_audit(data, options);
  CHECK(without_duration(niid::report_to_json(again)) == without_duration(text));
}

TEST_CASE("baseline audits") {
  const auto data = shifted();
  niid::AuditOptions options;
  options.method = niid::Method::Autocorr;
  const auto ac = niid::run_audit(data, options);
  CHECK_FALSE(ac.null.has_value());
  CHECK_FALSE(ac.argmax_d.has_value());
  const auto acj = json::parse(niid::report_to_json(ac));
  CHECK(acj["parameters"]["max_lag"] == 10);
  CHECK_FALSE(acj.contains("null"));

  options.method = niid::Method::Pca;
  const auto pca = niid::run_audit(data, options);
  CHECK(pca.null.has_value());
  const auto pj = json::parse(niid::report_to_json(pca));
  CHECK(pj["parameters"]["chunks"] == 10);
  CHECK(pj["parameters"]["components"] == 1);

  options.compute_scores = true;
  CHECK_THROWS_AS((void)niid::run_audit(data, options), niid::InvalidArgument);
}

TEST_CASE("audit option validation") {
  const auto data = shifted();
  niid::AuditOptions options;
  options.compute_scores = true;
  options.score_window = 4;
  CHECK_THROWS_AS((void)niid::run_audit(data, options), niid::InvalidArgument);
  options = {};
  options.method_options.k = 0;
  CHECK_THROWS_AS((void)niid::run_audit(data, options), niid::InvalidArgument);
  options = {};
  options.method_options.permutations = 1;
  CHECK_THROWS_AS((void)niid::run_audit(data, options), niid::InvalidArgument);
}

TEST_CASE("scores CSV") {
  niid::DatapointScores s;
  s.scores = {0.5, 0.25};
  s.smoothed = {0.375, 0.375};
  CHECK(niid::scores_to_csv(s) == "index,score,smoothed\n0,0.5,0.375\n1,0.25,0.375\n");
}
