// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "niid/bench.hpp"
#include "niid/generators.hpp"
#include "niid/knn.hpp"
#include "niid/kstat.hpp"
#include "niid/permute.hpp"
#include "niid/scores.hpp"
#include "oracles.hpp"

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::size_t count_below(const std::vector<double>& p, double alpha = 0.05) {
  return static_cast<std::size_t>(
      std::count_if(p.begin(), p.end(), [&](double v) { return v < alpha; }));
}

const niid::BenchmarkCell& find_cell(const niid::BenchmarkResult& r, niid::ScenarioKind kind,
                                     niid::Method method, niid::Variant variant) {
  for (const auto& c : r.cells) {
    if (c.scenario == kind && c.method == method && c.variant == variant) return c;
  }
  std::fprintf(stderr, "missing benchmark cell\n");
  std::exit(2);
}

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

Outcome null_uniformity() {
  niid::BenchmarkPlan plan;
  plan.scenarios = {niid::default_spec(niid::ScenarioKind::IidMixture)};
  plan.methods = {niid::Method::Knn};
  plan.replicates = 200;
  plan.base_seed = 10'000;
  const auto start = std::chrono::steady_clock::now();
  const auto result = niid::run_benchmark(plan);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto& p = find_cell(result, niid::ScenarioKind::IidMixture, niid::Method::Knn,
                            niid::Variant::Shuffled)
                      .p_values;
  const double sup = oracle::uniform_sup_distance(p);
  const double frac = double(count_below(p)) / double(p.size());
  return {sup <= 0.1 && frac >= 0.01 && frac <= 0.12 && seconds < 120.0,
          fmt("sup distance %.3f, fraction below 0.05 = %.3f, %.1f s", sup, frac, seconds)};
}

struct GaussianGrid {
  niid::BenchmarkResult result;
  std::size_t hits(niid::ScenarioKind kind, niid::Method method, niid::Variant variant) const {
    return count_below(find_cell(result, kind, method, variant).p_values);
  }
};

GaussianGrid run_gaussian_grid() {
  niid::BenchmarkPlan plan = niid::paper_gaussian_plan();
  plan.methods = {niid::Method::Knn, niid::Method::Autocorr};
  return {niid::run_benchmark(plan)};
}

Outcome mean_shift(const GaussianGrid& g) {
  const auto k = g.hits(niid::ScenarioKind::MeanShift, niid::Method::Knn, niid::Variant::AsIs);
  const auto s = g.hits(niid::ScenarioKind::MeanShift, niid::Method::Knn, niid::Variant::Shuffled);
  return {k >= 45 && s <= 7, fmt("knn %zu/50 as-is, %zu/50 shuffled", k, s)};
}

Outcome variance_changepoint(const GaussianGrid& g) {
  using niid::Method;
  using niid::Variant;
  const auto kind = niid::ScenarioKind::VarianceChangepoint;
  const auto k = g.hits(kind, Method::Knn, Variant::AsIs);
  const auto s = g.hits(kind, Method::Knn, Variant::Shuffled);
  const auto lb = g.hits(kind, Method::Autocorr, Variant::AsIs);
  const auto lbs = g.hits(kind, Method::Autocorr, Variant::Shuffled);
  const long knn_sep = long(k) - long(s);
  const long lb_sep = long(lb) - long(lbs);
  return {k >= 40 && s <= 7 && knn_sep - lb_sep >= 10,
          fmt("knn %zu/50 as-is, %zu/50 shuffled; ljung-box %zu/50 as-is, %zu/50 shuffled", k, s,
              lb, lbs)};
}

Outcome dependent(const GaussianGrid& g) {
  const auto kind = niid::ScenarioKind::ArDependent;
  const auto k = g.hits(kind, niid::Method::Knn, niid::Variant::AsIs);
  const auto lb = g.hits(kind, niid::Method::Autocorr, niid::Variant::AsIs);
  return {k >= 45 && lb >= 45, fmt("knn %zu/50, ljung-box %zu/50", k, lb)};
}

Outcome embeddings() {
  niid::BenchmarkPlan plan;
  plan.scenarios = {niid::default_spec(niid::ScenarioKind::SortedClasses),
                    niid::default_spec(niid::ScenarioKind::ClassDrift),
                    niid::default_spec(niid::ScenarioKind::ContiguousBlock)};
  plan.methods = {niid::Method::Knn};
  plan.include_shuffled_twin = false;
  plan.method_options.metric = niid::Metric::Cosine;
  plan.base_seed = 20'000;
  const auto result = niid::run_benchmark(plan);
  std::vector<std::size_t> hits;
  for (const auto& cell : result.cells) hits.push_back(count_below(cell.p_values));
  const bool pass = std::all_of(hits.begin(), hits.end(), [](std::size_t h) { return h >= 45; });
  return {pass, fmt("sorted_classes %zu/50, class_drift %zu/50, contiguous_block %zu/50", hits[0],
                    hits[1], hits[2])};
}

Outcome localization() {
  constexpr std::size_t kReps = 50;
  constexpr std::size_t kLo = 1250;
  constexpr std::size_t kHi = 1500;
  std::size_t below = 0;
  double block_gap = 0.0;
  double iid_gap = 0.0;
  const auto gap = [&](const niid::FeatureMatrix& data) {
    const auto g = niid::build_knn_graph(data, niid::kDefaultNeighbors, niid::Metric::Cosine);
    const auto s = niid::datapoint_scores(g);
    double inside = 0.0;
    double outside = 0.0;
    for (std::size_t i = 0; i < s.smoothed.size(); ++i) {
      (i >= kLo && i < kHi ? inside : outside) += s.smoothed[i];
    }
    return inside / double(kHi - kLo) - outside / double(s.smoothed.size() - (kHi - kLo));
  };
  for (std::size_t r = 0; r < kReps; ++r) {
    auto spec = niid::default_spec(niid::ScenarioKind::ContiguousBlock);
    spec.seed = 30'000 + r;
    const auto data = niid::generate(spec);
    const double d = gap(data);
    below += d < 0.0;
    block_gap += std::abs(d);
    iid_gap += std::abs(gap(niid::shuffle(data, 40'000 + r)));
  }
  block_gap /= kReps;
  iid_gap /= kReps;
  return {below >= 47 && iid_gap < 0.5 * block_gap,
          fmt("block lower in %zu/50; mean |gap| block %.4f, shuffled %.4f", below, block_gap,
              iid_gap)};
}

Outcome oracle_equivalences() {
  std::size_t checks = 0;
  for (std::size_t n = 2; n <= 200; ++n) {
    const auto bg = niid::background_cdf(n);
    const auto cdf = oracle::enumerate_background(n);
    for (std::size_t d = 0; d < n; ++d, ++checks) {
      if (std::abs(bg(d) - cdf[d]) > 1e-12) return {false, fmt("background mismatch n=%zu", n)};
    }
  }
  for (std::size_t n = 2; n <= 500; ++n) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto bg = niid::per_point_background(i, n);
      const auto cdf = oracle::enumerate_point_background(i, n);
      for (std::size_t d = 0; d < n; ++d, ++checks) {
        if (std::abs(bg(d) - cdf[d]) > 1e-12) {
          return {false, fmt("per-point background mismatch n=%zu i=%zu", n, i)};
        }
      }
    }
  }
  niid::Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = trial == 0 ? 300 : 2 + rng.below(299);
    const std::size_t f = 1 + rng.below(5);
    std::vector<double> v(n * f);
    // Half the trials use a coarse grid so distance ties are common.
    for (double& x : v) x = trial % 2 ? rng.normal() : double(1 + rng.below(3));
    const niid::FeatureMatrix data(n, f, v);
    const std::size_t k = 1 + rng.below(std::min<std::size_t>(n - 1, 20));
    for (const auto metric : {niid::Metric::Euclidean, niid::Metric::Cosine}) {
      const auto g = niid::build_knn_graph(data, k, metric);
      const auto expected = oracle::brute_force_knn(data, k, metric);
      for (std::size_t i = 0; i < n; ++i, ++checks) {
        if (oracle::neighbors_of(g, i) != expected[i]) {
          return {false, fmt("knn mismatch n=%zu k=%zu", n, k)};
        }
      }
    }
  }
  const auto data = oracle::random_matrix(50, 3, 6);
  const auto g = niid::build_knn_graph(data, 5, niid::Metric::Euclidean);
  for (int rep = 0; rep < 100; ++rep, ++checks) {
    const auto perm = niid::random_permutation(50, rng);
    std::vector<std::size_t> order(50);
    for (std::size_t i = 0; i < 50; ++i) order[perm[i]] = i;
    const auto rebuilt = niid::build_knn_graph(data.reordered(order), 5, niid::Metric::Euclidean);
    const double want = niid::ks_statistic(niid::foreground_distances(rebuilt),
                                           niid::BackgroundCdf(50)).t;
    if (std::abs(niid::permuted_statistic(g, perm).t - want) > 1e-12) {
      return {false, "permuted statistic differs from reorder-and-rebuild"};
    }
  }
  const auto hand1 = niid::ks_statistic({{1, 1, 1, 1, 1}}, niid::BackgroundCdf(5));
  const auto hand2 = niid::ks_statistic({{3, 3, 3}}, niid::BackgroundCdf(4));
  const bool hand = std::abs(hand1.t - 0.6) < 1e-15 && hand1.argmax_d == 1 &&
                    std::abs(hand2.t - 5.0 / 6.0) < 1e-15 && hand2.argmax_d == 2;
  return {hand, fmt("%zu comparisons, hand cases %s", checks, hand ? "exact" : "wrong")};
}

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string report_minus_duration(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find("\"duration_seconds\"") == std::string::npos) out << line << '\n';
  }
  return out.str();
}

Outcome determinism() {
  const std::string cli = NIID_CLI_PATH;
  if (shell(cli + " gen --kind variance_changepoint --seed 8 --out acc_data.csv") != 0) {
    return {false, "gen failed"};
  }
  const std::string audit =
      cli + " audit --input acc_data.csv --seed 12 --permutations 40 --scores --out ";
  if (shell(audit + "acc_r1.json") != 0 || shell(audit + "acc_r2.json") != 0 ||
      shell("NIID_THREADS=1 " + audit + "acc_r3.json") != 0) {
    return {false, "audit failed"};
  }
  const auto a = report_minus_duration("acc_r1.json");
  const bool repeat = !a.empty() && a == report_minus_duration("acc_r2.json");
  const bool threads = a == report_minus_duration("acc_r3.json");
  return {repeat && threads, fmt("repeat run %s, NIID_THREADS=1 vs auto %s",
                                 repeat ? "identical" : "differs", threads ? "identical" : "differs")};
}

}  // namespace

int main() {
  int failures = 0;
  const auto report = [&](int id, const char* name, const Outcome& o) {
    std::printf("[%s] criterion %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  };
  report(1, "null uniformity", null_uniformity());
  const auto grid = run_gaussian_grid();
  report(2, "mean-shift detection", mean_shift(grid));
  report(3, "variance-changepoint detection", variance_changepoint(grid));
  report(4, "dependent-data detection", dependent(grid));
  report(5, "embedding analogues", embeddings());
  report(6, "score localization", localization());
  report(7, "oracle equivalences", oracle_equivalences());
  report(8, "determinism", determinism());
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
