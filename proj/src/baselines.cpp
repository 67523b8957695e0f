#include "niid/baselines.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numeric>
#include <string>

#include "niid/errors.hpp"
#include "niid/parallel.hpp"
#include "niid/rng.hpp"

namespace niid {
namespace {

std::vector<double> column(const FeatureMatrix& data, std::size_t f) {
  std::vector<double> out(data.rows());
  for (std::size_t t = 0; t < data.rows(); ++t) out[t] = data(t, f);
  return out;
}

void check_ljung_box(std::size_t n, const LjungBoxConfig& cfg) {
  if (cfg.max_lag < 1) throw InvalidArgument("Ljung-Box max lag must be at least 1");
  if (n <= 4 * cfg.max_lag) {
    throw InvalidArgument("Ljung-Box needs n > 4 * max_lag (n = " + std::to_string(n) +
                          ", max_lag = " + std::to_string(cfg.max_lag) + ")");
  }
}

void check_pca(const FeatureMatrix& data, const PcaDriftConfig& cfg) {
  if (cfg.n_chunks < 2) throw InvalidArgument("PCA drift needs at least 2 chunks");
  if (data.rows() < 2 * cfg.n_chunks) {
    throw InvalidArgument("PCA drift needs at least 2 rows per chunk (n = " +
                          std::to_string(data.rows()) + ", chunks = " +
                          std::to_string(cfg.n_chunks) + ")");
  }
  if (cfg.n_components < 1 || cfg.n_components >= data.cols()) {
    throw InvalidArgument("PCA components must be in [1, dims - 1] (dims = " +
                          std::to_string(data.cols()) + ", got " +
                          std::to_string(cfg.n_components) + ")");
  }
  const auto values = data.values();
  const auto first = data.row(0);
  bool all_same = true;
  for (std::size_t i = 1; i < data.rows() && all_same; ++i) {
    all_same = std::equal(first.begin(), first.end(), values.begin() + i * data.cols());
  }
  if (all_same) throw InvalidArgument("PCA drift undefined: every row is identical");
}

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double drift_statistic(const FeatureMatrix& data, const PcaDriftConfig& cfg) {
  const std::size_t n = data.rows();
  const auto f = static_cast<Eigen::Index>(data.cols());
  const Eigen::Map<const RowMatrix> all(data.values().data(), static_cast<Eigen::Index>(n), f);
  auto chunk_begin = [&](std::size_t c) { return static_cast<Eigen::Index>(c * n / cfg.n_chunks); };

  const Eigen::Index ref_rows = chunk_begin(1);
  const auto reference = all.topRows(ref_rows);
  const Eigen::RowVectorXd mean = reference.colwise().mean();
  const Eigen::MatrixXd centered = reference.rowwise() - mean;
  const Eigen::MatrixXd cov =
      (centered.transpose() * centered) / static_cast<double>(ref_rows - 1);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  // Eigenvalues come out ascending; keep the trailing q eigenvectors.
  const auto q = static_cast<Eigen::Index>(cfg.n_components);
  const Eigen::MatrixXd axes = eig.eigenvectors().rightCols(q);

  std::vector<double> chunk_error(cfg.n_chunks, 0.0);
  for (std::size_t c = 0; c < cfg.n_chunks; ++c) {
    const Eigen::Index lo = chunk_begin(c);
    const Eigen::Index hi = chunk_begin(c + 1);
    double total = 0.0;
    for (Eigen::Index i = lo; i < hi; ++i) {
      const Eigen::VectorXd r = (all.row(i) - mean).transpose();
      const Eigen::VectorXd residual = r - axes * (axes.transpose() * r);
      total += residual.squaredNorm();
    }
    chunk_error[c] = total / static_cast<double>(hi - lo);
  }
  double stat = 0.0;
  for (std::size_t c = 1; c < cfg.n_chunks; ++c) {
    stat = std::max(stat, std::abs(chunk_error[c] - chunk_error[0]));
  }
  return stat;
}

}  // namespace

double chi_squared_sf(double x, double dof) {
  if (!(dof > 0.0)) throw InvalidArgument("chi-squared degrees of freedom must be positive");
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, x / 2.0);
}

std::vector<double> autocorrelations(std::span<const double> series, std::size_t max_lag) {
  const std::size_t n = series.size();
  if (max_lag >= n) throw InvalidArgument("lag must be below the series length");
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  double denom = 0.0;
  for (const double x : series) denom += (x - mean) * (x - mean);
  if (denom == 0.0) throw InvalidArgument("autocorrelation undefined for a constant series");
  std::vector<double> rho(max_lag);
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    double num = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) num += (series[t] - mean) * (series[t + lag] - mean);
    rho[lag - 1] = num / denom;
  }
  return rho;
}

std::vector<double> ljung_box_q(std::span<const double> series, std::size_t max_lag) {
  const auto rho = autocorrelations(series, max_lag);
  const double n = static_cast<double>(series.size());
  std::vector<double> q(max_lag);
  double sum = 0.0;
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    sum += rho[lag - 1] * rho[lag - 1] / (n - static_cast<double>(lag));
    q[lag - 1] = n * (n + 2.0) * sum;
  }
  return q;
}

double ljung_box_pvalue(const FeatureMatrix& data, const LjungBoxConfig& cfg) {
  check_ljung_box(data.rows(), cfg);
  double total = 0.0;
  for (std::size_t f = 0; f < data.cols(); ++f) {
    const auto col = column(data, f);
    const auto q = ljung_box_q(col, cfg.max_lag);
    for (std::size_t h = 1; h <= cfg.max_lag; ++h) {
      total += chi_squared_sf(q[h - 1], static_cast<double>(h));
    }
  }
  return total / static_cast<double>(data.cols() * cfg.max_lag);
}

double ljung_box_statistic(const FeatureMatrix& data, const LjungBoxConfig& cfg) {
  check_ljung_box(data.rows(), cfg);
  double total = 0.0;
  for (std::size_t f = 0; f < data.cols(); ++f) {
    total += ljung_box_q(column(data, f), cfg.max_lag).back();
  }
  return total / static_cast<double>(data.cols());
}

double pca_drift_statistic(const FeatureMatrix& data, const PcaDriftConfig& cfg) {
  check_pca(data, cfg);
  return drift_statistic(data, cfg);
}

TestResult pca_drift_test(const FeatureMatrix& data, const PcaDriftConfig& cfg,
                          std::uint64_t seed, unsigned threads) {
  check_pca(data, cfg);
  if (cfg.permutations < 2) throw InvalidArgument("PCA drift needs at least 2 permutations");
  TestResult result;
  result.seed = seed;
  result.t_observed = drift_statistic(data, cfg);
  std::vector<double> stats(cfg.permutations);
  parallel_for(cfg.permutations, threads, [&](std::size_t p) {
    Rng rng = Rng::for_stream(seed, p);
    stats[p] = drift_statistic(data.reordered(random_permutation(data.rows(), rng)), cfg);
  });
  result.null = make_null_distribution(std::move(stats), false);
  result.p_value = kde_p_value(result.t_observed, result.null);
  return result;
}

double pca_drift_pvalue(const FeatureMatrix& data, const PcaDriftConfig& cfg, std::uint64_t seed,
                        unsigned threads) {
  return pca_drift_test(data, cfg, seed, threads).p_value;
}

}  // namespace niid
