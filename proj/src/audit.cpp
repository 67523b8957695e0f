#include "niid/audit.hpp"

#include <chrono>
#include <charconv>
#include "json.hpp"
#include <string>

#include "niid/errors.hpp"

namespace niid {
namespace {

using ordered_json = nlohmann::ordered_json;

struct KnnOutcome {
  MethodResult result;
  std::size_t argmax_d;
  KnnGraph graph;
};

KnnOutcome run_knn(const FeatureMatrix& data, const MethodOptions& options) {
  KnnGraph graph = build_knn_graph(data, options.k, options.metric, options.threads);
  const auto observed = ks_statistic(foreground_distances(graph), BackgroundCdf(graph.size()));
  NullDistribution null =
      null_distribution(graph, options.permutations, options.seed, options.threads);
  MethodResult result;
  result.method = Method::Knn;
  result.statistic = observed.t;
  result.p_value = kde_p_value(observed.t, null);
  result.null = std::move(null);
  return {std::move(result), observed.argmax_d, std::move(graph)};
}

void append_number(std::string& out, double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  out.append(buf, res.ptr);
}

}  // namespace

Method parse_method(std::string_view name) {
  if (name == "knn") return Method::Knn;
  if (name == "autocorr") return Method::Autocorr;
  if (name == "pca") return Method::Pca;
  throw InvalidArgument("unknown method '" + std::string(name) +
                        "' (expected knn, autocorr or pca)");
}

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::Knn:
      return "knn";
    case Method::Autocorr:
      return "autocorr";
    case Method::Pca:
      return "pca";
  }
  return "unknown";
}

MethodResult run_method(const FeatureMatrix& data, Method method, const MethodOptions& options) {
  switch (method) {
    case Method::Knn:
      return run_knn(data, options).result;
    case Method::Autocorr: {
      MethodResult result;
      result.method = Method::Autocorr;
      result.statistic = ljung_box_statistic(data, options.ljung_box);
      result.p_value = ljung_box_pvalue(data, options.ljung_box);
      return result;
    }
    case Method::Pca: {
      PcaDriftConfig cfg = options.pca;
      cfg.permutations = options.permutations;
      TestResult test = pca_drift_test(data, cfg, options.seed, options.threads);
      MethodResult result;
      result.method = Method::Pca;
      result.statistic = test.t_observed;
      result.p_value = test.p_value;
      result.null = std::move(test.null);
      return result;
    }
  }
  throw InvalidArgument("unknown method");
}

AuditReport run_audit(const FeatureMatrix& data, const AuditOptions& options) {
  if (options.compute_scores && options.method != Method::Knn) {
    throw InvalidArgument("per-datapoint scores are only available with method knn");
  }
  if (options.compute_scores && options.score_window != 0 && options.score_window % 2 == 0) {
    throw InvalidArgument("score window must be odd, got " +
                          std::to_string(options.score_window));
  }
  const auto start = std::chrono::steady_clock::now();

  AuditReport report;
  report.method = options.method;
  report.parameters = options.method_options;
  report.parameters.pca.permutations = options.method_options.permutations;
  report.n = data.rows();
  report.dims = data.cols();

  if (options.method == Method::Knn) {
    KnnOutcome outcome = run_knn(data, options.method_options);
    report.statistic = outcome.result.statistic;
    report.p_value = outcome.result.p_value;
    report.null = std::move(outcome.result.null);
    report.argmax_d = outcome.argmax_d;
    if (options.compute_scores) {
      report.scores =
          datapoint_scores(outcome.graph, options.score_window, options.method_options.threads);
    }
  } else {
    MethodResult result = run_method(data, options.method, options.method_options);
    report.statistic = result.statistic;
    report.p_value = result.p_value;
    report.null = std::move(result.null);
  }

  report.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string report_to_json(const AuditReport& report) {
  const MethodOptions& p = report.parameters;
  ordered_json params;
  params["k"] = p.k;
  params["metric"] = std::string(to_string(p.metric));
  params["permutations"] = p.permutations;
  params["seed"] = p.seed;
  if (report.method == Method::Autocorr) params["max_lag"] = p.ljung_box.max_lag;
  if (report.method == Method::Pca) {
    params["chunks"] = p.pca.n_chunks;
    params["components"] = p.pca.n_components;
  }

  ordered_json j;
  j["method"] = std::string(to_string(report.method));
  j["parameters"] = std::move(params);
  j["n"] = report.n;
  j["dims"] = report.dims;
  j["statistic"] = report.statistic;
  j["p_value"] = report.p_value;
  if (report.argmax_d) j["argmax_d"] = *report.argmax_d;
  if (report.null) {
    j["null"] = {{"statistics", report.null->stats}, {"bandwidth", report.null->bandwidth}};
  }
  if (report.scores) {
    j["scores"] = {{"window", report.scores->window},
                   {"raw_stats", report.scores->raw_stats},
                   {"scores", report.scores->scores},
                   {"smoothed", report.scores->smoothed}};
  }
  j["duration_seconds"] = report.duration_seconds;
  return j.dump(2) + "\n";
}

std::string scores_to_csv(const DatapointScores& scores) {
  std::string out = "index,score,smoothed\n";
  out.reserve(out.size() + scores.scores.size() * 48);
  for (std::size_t i = 0; i < scores.scores.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    append_number(out, scores.scores[i]);
    out += ',';
    append_number(out, scores.smoothed[i]);
    out += '\n';
  }
  return out;
}

}  // namespace niid
