// niid: audit datasets for order dependence from the command line.
//
//   niid audit --input data.csv [--scores] [--fail-below 0.05]
//   niid gen --kind mean_shift --out data.csv
//   niid bench --paper-gaussian --out results.json
//
// Exit codes: 0 success, 1 I/O or data error, 2 invalid parameters,
// 3 p-value below --fail-below.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "niid/niid.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitGate = 3;

// Carries an exit code out of a subcommand.
struct Failure {
  int code;
  std::string message;
};

void check(niid_status status, const std::string& context) {
  if (status == NIID_OK) return;
  const int code = status == NIID_E_INVALID_ARGUMENT ? kExitUsage : kExitIo;
  throw Failure{code, context + ": " + niid_last_error()};
}

struct MatrixDeleter {
  void operator()(niid_matrix* m) const { niid_matrix_free(m); }
};
struct ReportDeleter {
  void operator()(niid_report* r) const { niid_report_free(r); }
};
struct StringDeleter {
  void operator()(char* s) const { niid_string_free(s); }
};
using MatrixPtr = std::unique_ptr<niid_matrix, MatrixDeleter>;
using ReportPtr = std::unique_ptr<niid_report, ReportDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

unsigned threads_from_env() {
  const char* raw = std::getenv("NIID_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  char* end = nullptr;
  const long value = std::strtol(raw, &end, 10);
  if (*end != '\0' || value < 0) {
    throw Failure{kExitUsage, std::string("NIID_THREADS must be a nonnegative integer, got '") +
                                  raw + "'"};
  }
  return static_cast<unsigned>(value);
}

niid_format resolve_format(const std::string& flag, const std::string& path) {
  std::string name = flag;
  if (name.empty()) {
    name = path.size() >= 5 && path.compare(path.size() - 5, 5, ".fbin") == 0 ? "fbin" : "csv";
  }
  niid_format format;
  check(niid_parse_format(name.c_str(), &format), "--format");
  return format;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  check(niid_write_text_file(path.c_str(), text.c_str()), "writing " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{kExitIo, "cannot open '" + path + "'"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---- audit -------------------------------------------------------------

struct AuditArgs {
  std::string input;
  std::string format;
  std::string method = "knn";
  std::size_t k = 10;
  std::string metric = "euclidean";
  std::size_t permutations = 25;
  std::uint64_t seed = 0;
  bool scores = false;
  std::size_t score_window = 0;
  std::string scores_out;
  std::string out;
  std::optional<double> fail_below;
  std::size_t max_lag = 10;
  std::size_t chunks = 10;
  std::size_t components = 1;
};

int cmd_audit(const AuditArgs& args) {
  niid_audit_options options;
  niid_audit_options_init(&options);
  check(niid_parse_method(args.method.c_str(), &options.method), "--method");
  check(niid_parse_metric(args.metric.c_str(), &options.metric), "--metric");
  options.k = args.k;
  options.permutations = args.permutations;
  options.seed = args.seed;
  options.compute_scores = args.scores ? 1 : 0;
  options.score_window = args.score_window;
  options.max_lag = args.max_lag;
  options.pca_chunks = args.chunks;
  options.pca_components = args.components;
  options.threads = threads_from_env();
  if (args.fail_below && !(*args.fail_below >= 0.0 && *args.fail_below <= 1.0)) {
    throw Failure{kExitUsage, "--fail-below must lie in [0, 1]"};
  }

  niid_matrix* raw_matrix = nullptr;
  check(niid_matrix_load(args.input.c_str(), resolve_format(args.format, args.input), &raw_matrix),
        "loading " + args.input);
  const MatrixPtr matrix(raw_matrix);

  niid_report* raw_report = nullptr;
  check(niid_audit(matrix.get(), &options, &raw_report), "audit");
  const ReportPtr report(raw_report);

  char* json = nullptr;
  check(niid_report_to_json(report.get(), &json), "report");
  emit(args.out, StringPtr(json).get());

  if (args.scores) {
    std::string scores_path = args.scores_out;
    if (scores_path.empty() && !args.out.empty() && args.out != "-") {
      scores_path = args.out + ".scores.csv";
    }
    if (!scores_path.empty()) {
      char* csv = nullptr;
      check(niid_report_scores_csv(report.get(), &csv), "scores");
      emit(scores_path, StringPtr(csv).get());
    }
  }

  const double p = niid_report_p_value(report.get());
  if (args.fail_below && p < *args.fail_below) {
    std::cerr << "niid: p-value " << p << " is below " << *args.fail_below << "\n";
    return kExitGate;
  }
  return kExitOk;
}

// ---- gen ---------------------------------------------------------------

struct GenArgs {
  std::string kind;
  std::string out;
  std::string format;
  std::optional<std::uint64_t> shuffle_seed;
  std::vector<double> alpha;
};

int cmd_gen(const GenArgs& args, const niid_scenario_spec& overrides, const CLI::App& app) {
  niid_scenario_kind kind;
  check(niid_parse_scenario_kind(args.kind.c_str(), &kind), "--kind");
  niid_scenario_spec spec;
  check(niid_scenario_init(kind, &spec), "--kind");

  auto given = [&](const char* name) { return app.count(name) > 0; };
  if (given("--n")) spec.n = overrides.n;
  if (given("--dims")) spec.dims = overrides.dims;
  if (given("--seed")) spec.seed = overrides.seed;
  if (given("--components")) spec.components = overrides.components;
  if (given("--total-shift")) spec.total_shift = overrides.total_shift;
  if (given("--variance-factor")) spec.variance_factor = overrides.variance_factor;
  if (given("--changepoint-fraction")) spec.changepoint_fraction = overrides.changepoint_fraction;
  if (given("--alpha")) {
    for (int i = 0; i < 3; ++i) spec.ar_coefficients[i] = args.alpha[static_cast<std::size_t>(i)];
  }
  if (given("--classes")) spec.classes = overrides.classes;
  if (given("--separation")) spec.class_separation = overrides.class_separation;
  if (given("--drift-decay")) spec.drift_decay = overrides.drift_decay;
  if (given("--block-len")) spec.block_len = overrides.block_len;
  if (given("--block-class")) spec.block_class = overrides.block_class;

  niid_matrix* raw = nullptr;
  check(niid_generate(&spec, &raw), "gen");
  MatrixPtr matrix(raw);
  if (args.shuffle_seed) {
    niid_matrix* shuffled = nullptr;
    check(niid_matrix_shuffle(matrix.get(), *args.shuffle_seed, &shuffled), "shuffle");
    matrix.reset(shuffled);
  }
  check(niid_matrix_save(matrix.get(), args.out.c_str(), resolve_format(args.format, args.out)),
        "writing " + args.out);
  return kExitOk;
}

// ---- bench -------------------------------------------------------------

struct BenchArgs {
  bool paper_gaussian = false;
  std::string plan;
  std::size_t replicates = 50;
  std::vector<std::string> scenarios;
  std::vector<std::string> methods;
  std::uint64_t base_seed = 0;
  bool no_shuffled_twin = false;
  std::size_t bins = 20;
  std::size_t k = 10;
  std::size_t permutations = 25;
  std::string metric = "euclidean";
  std::string out;
};

int cmd_bench(const BenchArgs& args, const CLI::App& app) {
  using nlohmann::ordered_json;
  std::string base;
  if (!args.plan.empty()) {
    base = read_text(args.plan);
  } else {
    char* raw = nullptr;
    check(niid_bench_default_plan(&raw), "bench");
    base = StringPtr(raw).get();
  }

  ordered_json plan;
  try {
    plan = ordered_json::parse(base);
  } catch (const ordered_json::parse_error& e) {
    throw Failure{kExitUsage, std::string("malformed plan: ") + e.what()};
  }
  if (!plan.is_object()) throw Failure{kExitUsage, "malformed plan: not a JSON object"};

  auto given = [&](const char* name) { return app.count(name) > 0; };
  if (given("--replicates")) plan["replicates"] = args.replicates;
  if (given("--base-seed")) plan["base_seed"] = args.base_seed;
  if (args.no_shuffled_twin) plan["include_shuffled_twin"] = false;
  if (given("--bins")) plan["bins"] = args.bins;
  if (given("--k")) plan["k"] = args.k;
  if (given("--permutations")) plan["permutations"] = args.permutations;
  if (given("--metric")) plan["metric"] = args.metric;
  if (given("--methods")) plan["methods"] = args.methods;
  if (given("--scenarios")) {
    ordered_json list = ordered_json::array();
    for (const auto& kind : args.scenarios) list.push_back({{"kind", kind}});
    plan["scenarios"] = list;
  }

  char* result = nullptr;
  check(niid_bench_run(plan.dump().c_str(), threads_from_env(), &result), "bench");
  emit(args.out, StringPtr(result).get());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"niid: detect order dependence (drift, changepoints, dependence) in datasets"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(niid_version()));

  AuditArgs audit;
  auto* audit_cmd = app.add_subcommand("audit", "Test whether collection order matters");
  audit_cmd->add_option("--input", audit.input, "Dataset file")->required();
  audit_cmd->add_option("--format", audit.format, "csv or fbin (default: from extension)");
  audit_cmd->add_option("--method", audit.method, "knn, autocorr or pca")->capture_default_str();
  audit_cmd->add_option("--k", audit.k, "Neighbors per datapoint")->capture_default_str();
  audit_cmd->add_option("--metric", audit.metric, "euclidean or cosine")->capture_default_str();
  audit_cmd->add_option("--permutations", audit.permutations, "Permutations for the null")
      ->capture_default_str();
  audit_cmd->add_option("--seed", audit.seed, "Random seed")->capture_default_str();
  audit_cmd->add_flag("--scores", audit.scores, "Compute per-datapoint scores");
  audit_cmd->add_option("--score-window", audit.score_window,
                        "Odd smoothing window (default max(3, N/50))");
  audit_cmd->add_option("--scores-out", audit.scores_out,
                        "Scores CSV path (default: <out>.scores.csv)");
  audit_cmd->add_option("--out", audit.out, "Report path (default: stdout)");
  audit_cmd->add_option("--fail-below", audit.fail_below, "Exit 3 when p < this value");
  audit_cmd->add_option("--max-lag", audit.max_lag, "autocorr: largest lag")->capture_default_str();
  audit_cmd->add_option("--chunks", audit.chunks, "pca: contiguous chunks")->capture_default_str();
  audit_cmd->add_option("--components", audit.components, "pca: principal components")
      ->capture_default_str();

  GenArgs gen;
  niid_scenario_spec gen_spec{};
  auto* gen_cmd = app.add_subcommand("gen", "Write a synthetic scenario dataset");
  gen_cmd->add_option("--kind", gen.kind,
                      "iid_mixture, mean_shift, variance_changepoint, ar_dependent, "
                      "sorted_classes, class_drift or contiguous_block")
      ->required();
  gen_cmd->add_option("--out", gen.out, "Output file")->required();
  gen_cmd->add_option("--format", gen.format, "csv or fbin (default: from extension)");
  gen_cmd->add_option("--n", gen_spec.n, "Datapoints");
  gen_cmd->add_option("--dims", gen_spec.dims, "Feature dimension");
  gen_cmd->add_option("--seed", gen_spec.seed, "Random seed");
  gen_cmd->add_option("--components", gen_spec.components, "Mixture components");
  gen_cmd->add_option("--total-shift", gen_spec.total_shift, "mean_shift: final shift");
  gen_cmd->add_option("--variance-factor", gen_spec.variance_factor,
                      "variance_changepoint: std multiplier");
  gen_cmd->add_option("--changepoint-fraction", gen_spec.changepoint_fraction,
                      "variance_changepoint: change position");
  gen_cmd->add_option("--alpha", gen.alpha, "ar_dependent: three coefficients")
      ->expected(3);
  gen_cmd->add_option("--classes", gen_spec.classes, "Embedding scenarios: classes");
  gen_cmd->add_option("--separation", gen_spec.class_separation, "Class-mean separation");
  gen_cmd->add_option("--drift-decay", gen_spec.drift_decay, "class_drift: final weight decay");
  gen_cmd->add_option("--block-len", gen_spec.block_len, "contiguous_block: block length");
  gen_cmd->add_option("--block-class", gen_spec.block_class, "contiguous_block: block class");
  gen_cmd->add_option("--shuffle", gen.shuffle_seed, "Shuffle rows with this seed");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Replicate p-value experiments");
  bench_cmd->add_flag("--paper-gaussian", bench.paper_gaussian,
                      "Gaussian grid: 3 scenarios x 3 methods x 50 replicates (default)");
  bench_cmd->add_option("--plan", bench.plan, "JSON plan file");
  bench_cmd->add_option("--replicates", bench.replicates, "Replicates per scenario");
  bench_cmd->add_option("--scenarios", bench.scenarios, "Scenario kinds (default settings)");
  bench_cmd->add_option("--methods", bench.methods, "knn, autocorr, pca");
  bench_cmd->add_option("--base-seed", bench.base_seed, "Seed of replicate 0");
  bench_cmd->add_flag("--no-shuffled-twin", bench.no_shuffled_twin, "Skip shuffled copies");
  bench_cmd->add_option("--bins", bench.bins, "Histogram bins");
  bench_cmd->add_option("--k", bench.k, "Neighbors per datapoint");
  bench_cmd->add_option("--permutations", bench.permutations, "Permutations");
  bench_cmd->add_option("--metric", bench.metric, "euclidean or cosine");
  bench_cmd->add_option("--out", bench.out, "Results path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*audit_cmd) return cmd_audit(audit);
    if (*gen_cmd) return cmd_gen(gen, gen_spec, *gen_cmd);
    if (*bench_cmd) {
      if (bench.paper_gaussian && !bench.plan.empty()) {
        throw Failure{kExitUsage, "--paper-gaussian and --plan are mutually exclusive"};
      }
      return cmd_bench(bench, *bench_cmd);
    }
  } catch (const Failure& f) {
    std::cerr << "niid: " << f.message << "\n";
    return f.code;
  }
  return kExitUsage;
}
