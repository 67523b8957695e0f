#include "niid/bench.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "json.hpp"
#include "niid/errors.hpp"
#include "niid/parallel.hpp"

namespace niid {
namespace {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

ordered_json scenario_to_json(const ScenarioSpec& s) {
  ordered_json j;
  j["kind"] = std::string(to_string(s.kind));
  j["n"] = s.n;
  j["dims"] = s.dims;
  switch (s.kind) {
    case ScenarioKind::IidMixture:
    case ScenarioKind::MeanShift:
    case ScenarioKind::VarianceChangepoint:
      j["components"] = s.components;
      j["total_shift"] = s.total_shift;
      j["variance_factor"] = s.variance_factor;
      j["changepoint_fraction"] = s.changepoint_fraction;
      break;
    case ScenarioKind::ArDependent:
      j["ar_coefficients"] = s.ar_coefficients;
      break;
    default:
      j["classes"] = s.classes;
      j["class_separation"] = s.class_separation;
      j["drift_decay"] = s.drift_decay;
      j["block_len"] = s.block_len;
      j["block_class"] = s.block_class;
      break;
  }
  return j;
}

template <class T>
void read_key(const json& obj, const char* key, T& into, std::set<std::string>& seen) {
  seen.insert(key);
  if (!obj.contains(key)) return;
  try {
    into = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("plan key '") + key + "' has the wrong type");
  }
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const char* where) {
  for (const auto& item : obj.items()) {
    if (!known.contains(item.key())) {
      throw InvalidArgument("unknown key '" + item.key() + "' in " + where);
    }
  }
}

ScenarioSpec scenario_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw InvalidArgument("each scenario needs a string 'kind'");
  }
  ScenarioSpec s = default_spec(parse_scenario_kind(j.at("kind").get<std::string>()));
  std::set<std::string> seen{"kind"};
  read_key(j, "n", s.n, seen);
  read_key(j, "dims", s.dims, seen);
  read_key(j, "components", s.components, seen);
  read_key(j, "total_shift", s.total_shift, seen);
  read_key(j, "variance_factor", s.variance_factor, seen);
  read_key(j, "changepoint_fraction", s.changepoint_fraction, seen);
  read_key(j, "ar_coefficients", s.ar_coefficients, seen);
  read_key(j, "classes", s.classes, seen);
  read_key(j, "class_separation", s.class_separation, seen);
  read_key(j, "drift_decay", s.drift_decay, seen);
  read_key(j, "block_len", s.block_len, seen);
  read_key(j, "block_class", s.block_class, seen);
  reject_unknown(j, seen, "scenario");
  validate(s);
  return s;
}

double fraction_below(std::span<const double> values, double alpha) {
  if (values.empty()) return 0.0;
  const auto hits = std::count_if(values.begin(), values.end(), [&](double p) { return p < alpha; });
  return static_cast<double>(hits) / static_cast<double>(values.size());
}

}  // namespace

std::string_view to_string(Variant variant) noexcept {
  return variant == Variant::Shuffled ? "shuffled" : "as-is";
}

BenchmarkPlan paper_gaussian_plan() {
  BenchmarkPlan plan;
  plan.scenarios = {default_spec(ScenarioKind::MeanShift),
                    default_spec(ScenarioKind::VarianceChangepoint),
                    default_spec(ScenarioKind::ArDependent)};
  plan.methods = {Method::Knn, Method::Autocorr, Method::Pca};
  return plan;
}

void validate(const BenchmarkPlan& plan) {
  if (plan.replicates < 1) throw InvalidArgument("benchmark needs at least 1 replicate");
  if (plan.methods.empty()) throw InvalidArgument("benchmark needs at least one method");
  if (plan.scenarios.empty()) throw InvalidArgument("benchmark needs at least one scenario");
  if (plan.bins < 1) throw InvalidArgument("histogram needs at least 1 bin");
  for (const auto& s : plan.scenarios) validate(s);
}

std::vector<std::size_t> histogram(std::span<const double> values, std::size_t bins) {
  if (bins < 1) throw InvalidArgument("histogram needs at least 1 bin");
  std::vector<std::size_t> counts(bins, 0);
  const double width = static_cast<double>(bins);
  for (const double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidArgument("histogram value " + std::to_string(v) + " outside [0, 1]");
    }
    // Bins are closed on the right: (b/B, (b+1)/B], with 0 joining the first.
    const double edge = std::ceil(v * width);
    const auto bin = edge <= 1.0 ? std::size_t{0} : static_cast<std::size_t>(edge) - 1;
    ++counts[std::min(bin, bins - 1)];
  }
  return counts;
}

double median(std::span<const double> values) {
  if (values.empty()) return 0.0;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  if (sorted.size() % 2 == 1) return sorted[mid];
  return 0.5 * (sorted[mid - 1] + sorted[mid]);
}

BenchmarkResult run_benchmark(const BenchmarkPlan& plan) {
  validate(plan);
  const std::size_t variants = plan.include_shuffled_twin ? 2 : 1;
  const std::size_t methods = plan.methods.size();
  const std::size_t per_scenario = methods * variants;
  const std::size_t cells = plan.scenarios.size() * per_scenario;

  // pvals[cell][replicate]
  std::vector<std::vector<double>> pvals(cells, std::vector<double>(plan.replicates));
  const std::size_t units = plan.scenarios.size() * plan.replicates;
  const unsigned outer = resolve_threads(plan.threads);

  parallel_for(units, outer, [&](std::size_t unit) {
    const std::size_t s = unit / plan.replicates;
    const std::size_t r = unit % plan.replicates;
    ScenarioSpec spec = plan.scenarios[s];
    spec.seed = plan.base_seed + r;
    const FeatureMatrix as_is = generate(spec);
    std::optional<FeatureMatrix> shuffled;
    if (plan.include_shuffled_twin) shuffled = shuffle(as_is, plan.base_seed + kShuffleSeedOffset + r);

    MethodOptions options = plan.method_options;
    options.seed = plan.base_seed + kPermutationSeedOffset + r;
    options.threads = outer > 1 ? 1 : plan.threads;
    for (std::size_t m = 0; m < methods; ++m) {
      for (std::size_t v = 0; v < variants; ++v) {
        const FeatureMatrix& data = v == 0 ? as_is : *shuffled;
        pvals[s * per_scenario + m * variants + v][r] =
            run_method(data, plan.methods[m], options).p_value;
      }
    }
  });

  BenchmarkResult result;
  result.plan = plan;
  result.cells.reserve(cells);
  for (std::size_t s = 0; s < plan.scenarios.size(); ++s) {
    for (std::size_t m = 0; m < methods; ++m) {
      for (std::size_t v = 0; v < variants; ++v) {
        BenchmarkCell cell;
        cell.scenario_index = s;
        cell.scenario = plan.scenarios[s].kind;
        cell.method = plan.methods[m];
        cell.variant = v == 0 ? Variant::AsIs : Variant::Shuffled;
        cell.p_values = std::move(pvals[s * per_scenario + m * variants + v]);
        cell.histogram = histogram(cell.p_values, plan.bins);
        cell.fraction_below_005 = fraction_below(cell.p_values, 0.05);
        cell.median = median(cell.p_values);
        result.cells.push_back(std::move(cell));
      }
    }
  }
  return result;
}

std::string plan_to_json(const BenchmarkPlan& plan) {
  ordered_json j;
  j["scenarios"] = ordered_json::array();
  for (const auto& s : plan.scenarios) j["scenarios"].push_back(scenario_to_json(s));
  j["methods"] = ordered_json::array();
  for (const Method m : plan.methods) j["methods"].push_back(std::string(to_string(m)));
  j["replicates"] = plan.replicates;
  j["include_shuffled_twin"] = plan.include_shuffled_twin;
  j["base_seed"] = plan.base_seed;
  j["k"] = plan.method_options.k;
  j["metric"] = std::string(to_string(plan.method_options.metric));
  j["permutations"] = plan.method_options.permutations;
  j["max_lag"] = plan.method_options.ljung_box.max_lag;
  j["pca_chunks"] = plan.method_options.pca.n_chunks;
  j["pca_components"] = plan.method_options.pca.n_components;
  j["bins"] = plan.bins;
  return j.dump(2) + "\n";
}

BenchmarkPlan plan_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("malformed plan: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("plan must be a JSON object");

  BenchmarkPlan plan = paper_gaussian_plan();
  std::set<std::string> seen{"scenarios", "methods", "metric"};
  if (j.contains("scenarios")) {
    if (!j.at("scenarios").is_array()) throw InvalidArgument("'scenarios' must be an array");
    plan.scenarios.clear();
    for (const auto& s : j.at("scenarios")) plan.scenarios.push_back(scenario_from_json(s));
  }
  if (j.contains("methods")) {
    if (!j.at("methods").is_array()) throw InvalidArgument("'methods' must be an array");
    plan.methods.clear();
    for (const auto& m : j.at("methods")) {
      if (!m.is_string()) throw InvalidArgument("method identifiers must be strings");
      plan.methods.push_back(parse_method(m.get<std::string>()));
    }
  }
  if (j.contains("metric")) {
    if (!j.at("metric").is_string()) throw InvalidArgument("'metric' must be a string");
    plan.method_options.metric = parse_metric(j.at("metric").get<std::string>());
  }
  read_key(j, "replicates", plan.replicates, seen);
  read_key(j, "include_shuffled_twin", plan.include_shuffled_twin, seen);
  read_key(j, "base_seed", plan.base_seed, seen);
  read_key(j, "k", plan.method_options.k, seen);
  read_key(j, "permutations", plan.method_options.permutations, seen);
  read_key(j, "max_lag", plan.method_options.ljung_box.max_lag, seen);
  read_key(j, "pca_chunks", plan.method_options.pca.n_chunks, seen);
  read_key(j, "pca_components", plan.method_options.pca.n_components, seen);
  read_key(j, "bins", plan.bins, seen);
  reject_unknown(j, seen, "plan");
  validate(plan);
  return plan;
}

std::string result_to_json(const BenchmarkResult& result) {
  ordered_json j;
  j["plan"] = ordered_json::parse(plan_to_json(result.plan));
  j["results"] = ordered_json::array();
  for (const auto& cell : result.cells) {
    ordered_json c;
    c["scenario_index"] = cell.scenario_index;
    c["scenario"] = std::string(to_string(cell.scenario));
    c["method"] = std::string(to_string(cell.method));
    c["variant"] = std::string(to_string(cell.variant));
    c["p_values"] = cell.p_values;
    c["histogram"] = cell.histogram;
    c["fraction_below_0.05"] = cell.fraction_below_005;
    c["median"] = cell.median;
    j["results"].push_back(std::move(c));
  }
  return j.dump(2) + "\n";
}

}  // namespace niid
