#include "niid/niid.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "niid/audit.hpp"
#include "niid/bench.hpp"
#include "niid/errors.hpp"
#include "niid/generators.hpp"
#include "niid/io.hpp"
#include "niid/knn.hpp"

struct niid_matrix {
  niid::FeatureMatrix value;
};

struct niid_graph {
  niid::KnnGraph value;
};

struct niid_report {
  niid::AuditReport value;
};

namespace {

thread_local std::string last_error;

template <class Body>
niid_status guarded(Body&& body) noexcept {
  try {
    body();
    return NIID_OK;
  } catch (const niid::InvalidArgument& e) {
    last_error = e.what();
    return NIID_E_INVALID_ARGUMENT;
  } catch (const niid::DataError& e) {
    last_error = e.what();
    return NIID_E_DATA;
  } catch (const niid::IoError& e) {
    last_error = e.what();
    return NIID_E_IO;
  } catch (const std::exception& e) {
    last_error = e.what();
    return NIID_E_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return NIID_E_INTERNAL;
  }
}

void require(const void* ptr, const char* what) {
  if (ptr == nullptr) throw niid::InvalidArgument(std::string(what) + " must not be NULL");
}

char* copy_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

niid::Metric to_metric(niid_metric m) {
  switch (m) {
    case NIID_METRIC_EUCLIDEAN:
      return niid::Metric::Euclidean;
    case NIID_METRIC_COSINE:
      return niid::Metric::Cosine;
  }
  throw niid::InvalidArgument("unknown metric value " + std::to_string(static_cast<int>(m)));
}

niid::MatrixFormat to_format(niid_format f) {
  switch (f) {
    case NIID_FORMAT_CSV:
      return niid::MatrixFormat::Csv;
    case NIID_FORMAT_FBIN:
      return niid::MatrixFormat::Fbin;
  }
  throw niid::InvalidArgument("unknown format value " + std::to_string(static_cast<int>(f)));
}

niid::Method to_method(niid_method m) {
  switch (m) {
    case NIID_METHOD_KNN:
      return niid::Method::Knn;
    case NIID_METHOD_AUTOCORR:
      return niid::Method::Autocorr;
    case NIID_METHOD_PCA:
      return niid::Method::Pca;
  }
  throw niid::InvalidArgument("unknown method value " + std::to_string(static_cast<int>(m)));
}

niid::ScenarioKind to_kind(niid_scenario_kind k) {
  if (k < NIID_SCENARIO_IID_MIXTURE || k > NIID_SCENARIO_CONTIGUOUS_BLOCK) {
    throw niid::InvalidArgument("unknown scenario kind value " +
                                std::to_string(static_cast<int>(k)));
  }
  return static_cast<niid::ScenarioKind>(k);
}

niid_scenario_spec to_c(const niid::ScenarioSpec& s) {
  niid_scenario_spec c{};
  c.kind = static_cast<niid_scenario_kind>(s.kind);
  c.n = s.n;
  c.dims = s.dims;
  c.seed = s.seed;
  c.components = s.components;
  c.total_shift = s.total_shift;
  c.variance_factor = s.variance_factor;
  c.changepoint_fraction = s.changepoint_fraction;
  for (int i = 0; i < 3; ++i) c.ar_coefficients[i] = s.ar_coefficients[i];
  c.classes = s.classes;
  c.class_separation = s.class_separation;
  c.drift_decay = s.drift_decay;
  c.block_len = s.block_len;
  c.block_class = s.block_class;
  return c;
}

niid::ScenarioSpec from_c(const niid_scenario_spec& c) {
  niid::ScenarioSpec s;
  s.kind = to_kind(c.kind);
  s.n = c.n;
  s.dims = c.dims;
  s.seed = c.seed;
  s.components = c.components;
  s.total_shift = c.total_shift;
  s.variance_factor = c.variance_factor;
  s.changepoint_fraction = c.changepoint_fraction;
  for (int i = 0; i < 3; ++i) s.ar_coefficients[i] = c.ar_coefficients[i];
  s.classes = c.classes;
  s.class_separation = c.class_separation;
  s.drift_decay = c.drift_decay;
  s.block_len = c.block_len;
  s.block_class = c.block_class;
  return s;
}

}  // namespace

extern "C" {

const char* niid_version(void) { return "1.0.0"; }

const char* niid_last_error(void) { return last_error.c_str(); }

const char* niid_status_name(niid_status status) {
  switch (status) {
    case NIID_OK:
      return "ok";
    case NIID_E_INVALID_ARGUMENT:
      return "invalid argument";
    case NIID_E_IO:
      return "i/o error";
    case NIID_E_DATA:
      return "data error";
    case NIID_E_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

void niid_string_free(char* str) { std::free(str); }

niid_status niid_parse_metric(const char* name, niid_metric* out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = niid::parse_metric(name) == niid::Metric::Cosine ? NIID_METRIC_COSINE
                                                             : NIID_METRIC_EUCLIDEAN;
  });
}

niid_status niid_parse_format(const char* name, niid_format* out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = niid::parse_format(name) == niid::MatrixFormat::Fbin ? NIID_FORMAT_FBIN
                                                                 : NIID_FORMAT_CSV;
  });
}

niid_status niid_parse_method(const char* name, niid_method* out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = static_cast<niid_method>(niid::parse_method(name));
  });
}

niid_status niid_parse_scenario_kind(const char* name, niid_scenario_kind* out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = static_cast<niid_scenario_kind>(niid::parse_scenario_kind(name));
  });
}

const char* niid_scenario_kind_name(niid_scenario_kind kind) {
  // Names are backed by string literals, so the view is null-terminated.
  return niid::to_string(static_cast<niid::ScenarioKind>(kind)).data();
}

niid_status niid_matrix_create(size_t rows, size_t cols, const double* values,
                               niid_matrix** out) {
  return guarded([&] {
    require(out, "out");
    if (rows * cols > 0) require(values, "values");
    std::vector<double> copy(values, values + rows * cols);
    *out = new niid_matrix{niid::FeatureMatrix(rows, cols, std::move(copy))};
  });
}

niid_status niid_matrix_load(const char* path, niid_format format, niid_matrix** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new niid_matrix{niid::load_matrix(path, to_format(format))};
  });
}

niid_status niid_matrix_save(const niid_matrix* matrix, const char* path, niid_format format) {
  return guarded([&] {
    require(matrix, "matrix");
    require(path, "path");
    niid::write_matrix(matrix->value, path, to_format(format));
  });
}

size_t niid_matrix_rows(const niid_matrix* matrix) { return matrix ? matrix->value.rows() : 0; }

size_t niid_matrix_cols(const niid_matrix* matrix) { return matrix ? matrix->value.cols() : 0; }

niid_status niid_matrix_copy_values(const niid_matrix* matrix, double* out, size_t capacity) {
  return guarded([&] {
    require(matrix, "matrix");
    require(out, "out");
    const auto values = matrix->value.values();
    if (capacity < values.size()) throw niid::InvalidArgument("output buffer too small");
    std::copy(values.begin(), values.end(), out);
  });
}

niid_status niid_matrix_shuffle(const niid_matrix* matrix, uint64_t seed, niid_matrix** out) {
  return guarded([&] {
    require(matrix, "matrix");
    require(out, "out");
    *out = new niid_matrix{niid::shuffle(matrix->value, seed)};
  });
}

void niid_matrix_free(niid_matrix* matrix) { delete matrix; }

niid_status niid_scenario_init(niid_scenario_kind kind, niid_scenario_spec* spec) {
  return guarded([&] {
    require(spec, "spec");
    *spec = to_c(niid::default_spec(to_kind(kind)));
  });
}

niid_status niid_generate(const niid_scenario_spec* spec, niid_matrix** out) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    *out = new niid_matrix{niid::generate(from_c(*spec))};
  });
}

niid_status niid_graph_build(const niid_matrix* matrix, size_t k, niid_metric metric,
                             unsigned threads, niid_graph** out) {
  return guarded([&] {
    require(matrix, "matrix");
    require(out, "out");
    *out = new niid_graph{niid::build_knn_graph(matrix->value, k, to_metric(metric), threads)};
  });
}

size_t niid_graph_size(const niid_graph* graph) { return graph ? graph->value.size() : 0; }

size_t niid_graph_k(const niid_graph* graph) { return graph ? graph->value.k() : 0; }

niid_status niid_graph_neighbors(const niid_graph* graph, size_t i, size_t* out,
                                 size_t capacity) {
  return guarded([&] {
    require(graph, "graph");
    require(out, "out");
    if (i >= graph->value.size()) throw niid::InvalidArgument("node index out of range");
    if (capacity < graph->value.k()) throw niid::InvalidArgument("output buffer too small");
    const auto nb = graph->value.neighbors(i);
    std::copy(nb.begin(), nb.end(), out);
  });
}

void niid_graph_free(niid_graph* graph) { delete graph; }

void niid_audit_options_init(niid_audit_options* options) {
  if (options == nullptr) return;
  const niid::MethodOptions defaults;
  *options = niid_audit_options{};
  options->method = NIID_METHOD_KNN;
  options->k = defaults.k;
  options->metric = NIID_METRIC_EUCLIDEAN;
  options->permutations = defaults.permutations;
  options->seed = defaults.seed;
  options->compute_scores = 0;
  options->score_window = 0;
  options->max_lag = defaults.ljung_box.max_lag;
  options->pca_chunks = defaults.pca.n_chunks;
  options->pca_components = defaults.pca.n_components;
  options->threads = 0;
}

niid_status niid_audit(const niid_matrix* matrix, const niid_audit_options* options,
                       niid_report** out) {
  return guarded([&] {
    require(matrix, "matrix");
    require(options, "options");
    require(out, "out");
    niid::AuditOptions opts;
    opts.method = to_method(options->method);
    opts.method_options.k = options->k;
    opts.method_options.metric = to_metric(options->metric);
    opts.method_options.permutations = options->permutations;
    opts.method_options.seed = options->seed;
    opts.method_options.ljung_box.max_lag = options->max_lag;
    opts.method_options.pca.n_chunks = options->pca_chunks;
    opts.method_options.pca.n_components = options->pca_components;
    opts.method_options.threads = options->threads;
    opts.compute_scores = options->compute_scores != 0;
    opts.score_window = options->score_window;
    *out = new niid_report{niid::run_audit(matrix->value, opts)};
  });
}

double niid_report_statistic(const niid_report* report) {
  return report ? report->value.statistic : 0.0;
}

double niid_report_p_value(const niid_report* report) {
  return report ? report->value.p_value : 1.0;
}

size_t niid_report_score_count(const niid_report* report) {
  return report && report->value.scores ? report->value.scores->scores.size() : 0;
}

niid_status niid_report_scores(const niid_report* report, double* scores, double* smoothed,
                               size_t capacity) {
  return guarded([&] {
    require(report, "report");
    if (!report->value.scores) throw niid::InvalidArgument("report carries no scores");
    const auto& s = *report->value.scores;
    if (capacity < s.scores.size()) throw niid::InvalidArgument("output buffer too small");
    if (scores) std::copy(s.scores.begin(), s.scores.end(), scores);
    if (smoothed) std::copy(s.smoothed.begin(), s.smoothed.end(), smoothed);
  });
}

niid_status niid_report_to_json(const niid_report* report, char** out) {
  return guarded([&] {
    require(report, "report");
    require(out, "out");
    *out = copy_string(niid::report_to_json(report->value));
  });
}

niid_status niid_report_scores_csv(const niid_report* report, char** out) {
  return guarded([&] {
    require(report, "report");
    require(out, "out");
    if (!report->value.scores) throw niid::InvalidArgument("report carries no scores");
    *out = copy_string(niid::scores_to_csv(*report->value.scores));
  });
}

void niid_report_free(niid_report* report) { delete report; }

niid_status niid_bench_default_plan(char** plan_json) {
  return guarded([&] {
    require(plan_json, "plan_json");
    *plan_json = copy_string(niid::plan_to_json(niid::paper_gaussian_plan()));
  });
}

niid_status niid_bench_run(const char* plan_json, unsigned threads, char** result_json) {
  return guarded([&] {
    require(plan_json, "plan_json");
    require(result_json, "result_json");
    niid::BenchmarkPlan plan = niid::plan_from_json(plan_json);
    plan.threads = threads;
    *result_json = copy_string(niid::result_to_json(niid::run_benchmark(plan)));
  });
}

niid_status niid_write_text_file(const char* path, const char* contents) {
  return guarded([&] {
    require(path, "path");
    require(contents, "contents");
    niid::write_file_atomic(path, std::string_view(contents));
  });
}

}  // extern "C"
