#include "niid/generators.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "niid/errors.hpp"

namespace niid {
namespace {

// Sub-streams of the scenario seed.
constexpr std::uint64_t kModelStream = 0;
constexpr std::uint64_t kLabelStream = 1;
constexpr std::uint64_t kNoiseStream = 2;

constexpr double kMeanBox = 10.0;

struct KindName {
  ScenarioKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {ScenarioKind::IidMixture, "iid_mixture"},
    {ScenarioKind::MeanShift, "mean_shift"},
    {ScenarioKind::VarianceChangepoint, "variance_changepoint"},
    {ScenarioKind::ArDependent, "ar_dependent"},
    {ScenarioKind::SortedClasses, "sorted_classes"},
    {ScenarioKind::ClassDrift, "class_drift"},
    {ScenarioKind::ContiguousBlock, "contiguous_block"},
};

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidArgument(message);
}

void require_kind(const ScenarioSpec& spec, std::initializer_list<ScenarioKind> kinds,
                  std::string_view generator) {
  for (const ScenarioKind k : kinds) {
    if (spec.kind == k) return;
  }
  throw InvalidArgument(std::string(generator) + " cannot generate scenario '" +
                        std::string(to_string(spec.kind)) + "'");
}

std::size_t block_start(const ScenarioSpec& spec) {
  return std::min(spec.n / 2, spec.n - spec.block_len);
}

// Rows drawn from the mixture; `shift(t)` offsets every mean and
// `scale(t)` multiplies every std for sample t.
template <class Shift, class Scale>
FeatureMatrix sample_mixture(const ScenarioSpec& spec, Shift shift, Scale scale) {
  Rng model_rng = Rng::for_stream(spec.seed, kModelStream);
  const MixtureModel model = MixtureModel::draw(spec.components, spec.dims, model_rng);
  Rng rng = Rng::for_stream(spec.seed, kNoiseStream);
  std::vector<double> values;
  values.reserve(spec.n * spec.dims);
  for (std::size_t t = 0; t < spec.n; ++t) {
    const auto c = static_cast<std::size_t>(rng.below(spec.components));
    const double offset = shift(t);
    const double sd = model.stds[c] * scale(t);
    for (std::size_t f = 0; f < spec.dims; ++f) {
      values.push_back(model.means[c][f] + offset + sd * rng.normal());
    }
  }
  return FeatureMatrix(spec.n, spec.dims, std::move(values));
}

}  // namespace

ScenarioKind parse_scenario_kind(std::string_view name) {
  for (const auto& entry : kKindNames) {
    if (entry.name == name) return entry.kind;
  }
  throw InvalidArgument("unknown scenario kind '" + std::string(name) + "'");
}

std::string_view to_string(ScenarioKind kind) noexcept {
  for (const auto& entry : kKindNames) {
    if (entry.kind == kind) return entry.name;
  }
  return "unknown";
}

ScenarioSpec default_spec(ScenarioKind kind) {
  ScenarioSpec spec;
  spec.kind = kind;
  switch (kind) {
    case ScenarioKind::SortedClasses:
      spec.n = 10000;
      spec.dims = 64;
      break;
    case ScenarioKind::ClassDrift:
      spec.n = 5000;
      spec.dims = 64;
      break;
    case ScenarioKind::ContiguousBlock:
      spec.n = 2500;
      spec.dims = 64;
      break;
    default:
      break;
  }
  return spec;
}

void validate(const ScenarioSpec& spec) {
  require(spec.n >= 10, "scenario needs n >= 10, got " + std::to_string(spec.n));
  require(spec.dims >= 1, "scenario needs dims >= 1");
  switch (spec.kind) {
    case ScenarioKind::IidMixture:
    case ScenarioKind::MeanShift:
    case ScenarioKind::VarianceChangepoint:
      require(spec.components >= 1, "mixture needs at least one component");
      require(std::isfinite(spec.total_shift), "total_shift must be finite");
      require(std::isfinite(spec.variance_factor) && spec.variance_factor > 0.0,
              "variance factor must be positive");
      require(spec.changepoint_fraction >= 0.0 && spec.changepoint_fraction <= 1.0,
              "changepoint fraction must lie in [0, 1]");
      break;
    case ScenarioKind::ArDependent: {
      const auto& a = spec.ar_coefficients;
      for (const double x : a) require(std::isfinite(x), "AR coefficients must be finite");
      require(std::abs(a[0] + a[1] + a[2]) <= 1e-9, "AR coefficients must sum to zero");
      break;
    }
    case ScenarioKind::SortedClasses:
    case ScenarioKind::ClassDrift:
    case ScenarioKind::ContiguousBlock:
      require(spec.classes >= (spec.kind == ScenarioKind::SortedClasses ? 1u : 2u),
              "scenario '" + std::string(to_string(spec.kind)) + "' needs at least " +
                  (spec.kind == ScenarioKind::SortedClasses ? "1 class" : "2 classes"));
      require(std::isfinite(spec.class_separation) && spec.class_separation >= 0.0,
              "class separation must be nonnegative");
      require(std::isfinite(spec.drift_decay) && spec.drift_decay > 0.0,
              "drift decay must be positive");
      if (spec.kind == ScenarioKind::ContiguousBlock) {
        require(spec.block_len >= 1 && spec.block_len < spec.n,
                "block length must be in [1, n - 1], got " + std::to_string(spec.block_len));
        require(spec.block_class < spec.classes, "block class out of range");
      }
      break;
  }
}

MixtureModel MixtureModel::draw(std::size_t components, std::size_t dims, Rng& rng) {
  MixtureModel model;
  model.means.resize(components);
  model.stds.resize(components);
  for (std::size_t c = 0; c < components; ++c) {
    model.means[c].resize(dims);
    for (double& m : model.means[c]) m = rng.uniform(0.0, kMeanBox);
    model.stds[c] = rng.uniform();
  }
  return model;
}

FeatureMatrix gen_iid_mixture(const ScenarioSpec& spec) {
  require_kind(spec, {ScenarioKind::IidMixture}, "gen_iid_mixture");
  validate(spec);
  return sample_mixture(spec, [](std::size_t) { return 0.0; }, [](std::size_t) { return 1.0; });
}

FeatureMatrix gen_mean_shift(const ScenarioSpec& spec) {
  require_kind(spec, {ScenarioKind::MeanShift}, "gen_mean_shift");
  validate(spec);
  const double n = static_cast<double>(spec.n);
  return sample_mixture(
      spec, [&](std::size_t t) { return spec.total_shift * static_cast<double>(t) / n; },
      [](std::size_t) { return 1.0; });
}

FeatureMatrix gen_variance_changepoint(const ScenarioSpec& spec) {
  require_kind(spec, {ScenarioKind::VarianceChangepoint}, "gen_variance_changepoint");
  validate(spec);
  const auto change_at =
      static_cast<std::size_t>(std::ceil(spec.changepoint_fraction * static_cast<double>(spec.n)));
  return sample_mixture(
      spec, [](std::size_t) { return 0.0; },
      [&](std::size_t t) { return t < change_at ? 1.0 : spec.variance_factor; });
}

FeatureMatrix gen_ar_dependent(const ScenarioSpec& spec) {
  require_kind(spec, {ScenarioKind::ArDependent}, "gen_ar_dependent");
  validate(spec);
  const auto& a = spec.ar_coefficients;
  const std::size_t f = spec.dims;
  Rng rng = Rng::for_stream(spec.seed, kNoiseStream);
  std::vector<double> values(spec.n * f);
  for (std::size_t t = 0; t < spec.n; ++t) {
    for (std::size_t d = 0; d < f; ++d) {
      double mean = 0.0;
      if (t >= 3) {
        mean = a[0] * values[(t - 1) * f + d] + a[1] * values[(t - 2) * f + d] +
               a[2] * values[(t - 3) * f + d];
      }
      values[t * f + d] = mean + rng.normal();
    }
  }
  return FeatureMatrix(spec.n, f, std::move(values));
}

std::vector<std::size_t> embedding_labels(const ScenarioSpec& spec) {
  require_kind(spec,
               {ScenarioKind::SortedClasses, ScenarioKind::ClassDrift,
                ScenarioKind::ContiguousBlock},
               "embedding_labels");
  validate(spec);
  const std::size_t n = spec.n;
  const std::size_t classes = spec.classes;
  std::vector<std::size_t> labels(n);
  Rng rng = Rng::for_stream(spec.seed, kLabelStream);

  switch (spec.kind) {
    case ScenarioKind::SortedClasses:
      for (std::size_t i = 0; i < n; ++i) labels[i] = i * classes / n;
      break;
    case ScenarioKind::ClassDrift: {
      std::vector<double> skew(classes);
      for (std::size_t c = 0; c < classes; ++c) {
        skew[c] = std::pow(spec.drift_decay, static_cast<double>(c));
      }
      const double skew_total = std::accumulate(skew.begin(), skew.end(), 0.0);
      const double uniform = 1.0 / static_cast<double>(classes);
      for (std::size_t i = 0; i < n; ++i) {
        const double lambda = static_cast<double>(i) / static_cast<double>(n - 1);
        double u = rng.uniform();
        std::size_t c = 0;
        for (; c + 1 < classes; ++c) {
          const double w = (1.0 - lambda) * uniform + lambda * skew[c] / skew_total;
          if (u < w) break;
          u -= w;
        }
        labels[i] = c;
      }
      break;
    }
    case ScenarioKind::ContiguousBlock: {
      const std::size_t start = block_start(spec);
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t drawn = rng.below(classes);
        labels[i] = (i >= start && i < start + spec.block_len) ? spec.block_class : drawn;
      }
      break;
    }
    default:
      break;
  }
  return labels;
}

FeatureMatrix gen_embedding_scenario(const ScenarioSpec& spec) {
  require_kind(spec,
               {ScenarioKind::SortedClasses, ScenarioKind::ClassDrift,
                ScenarioKind::ContiguousBlock},
               "gen_embedding_scenario");
  const auto labels = embedding_labels(spec);
  const std::size_t f = spec.dims;

  // Per-coordinate class-mean sd of separation / sqrt(2) makes the RMS
  // per-coordinate gap between two class means equal `separation` unit sds.
  Rng model_rng = Rng::for_stream(spec.seed, kModelStream);
  const double mean_sd = spec.class_separation / std::sqrt(2.0);
  std::vector<double> means(spec.classes * f);
  for (double& m : means) m = mean_sd * model_rng.normal();

  Rng rng = Rng::for_stream(spec.seed, kNoiseStream);
  std::vector<double> values(spec.n * f);
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t d = 0; d < f; ++d) values[i * f + d] = means[labels[i] * f + d] + rng.normal();
  }
  return FeatureMatrix(spec.n, f, std::move(values));
}

FeatureMatrix generate(const ScenarioSpec& spec) {
  switch (spec.kind) {
    case ScenarioKind::IidMixture:
      return gen_iid_mixture(spec);
    case ScenarioKind::MeanShift:
      return gen_mean_shift(spec);
    case ScenarioKind::VarianceChangepoint:
      return gen_variance_changepoint(spec);
    case ScenarioKind::ArDependent:
      return gen_ar_dependent(spec);
    default:
      return gen_embedding_scenario(spec);
  }
}

FeatureMatrix shuffle(const FeatureMatrix& data, std::uint64_t seed) {
  Rng rng(seed);
  return data.reordered(random_permutation(data.rows(), rng));
}

}  // namespace niid
