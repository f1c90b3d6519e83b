#include "tennis/grnn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "tennis/error.hpp"

namespace tennis::grnn {

std::vector<double> GrnnModel::normalize(std::span<const double> raw) const {
  if (raw.size() != ranges.size()) throw ArgumentError("GrnnModel::normalize: dimension mismatch");
  std::vector<double> out(raw.size());
  for (std::size_t j = 0; j < raw.size(); ++j) out[j] = ranges[j].apply(raw[j]);
  return out;
}

double kernel_regression(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, double sigma,
                         std::span<const double> x) {
  if (static_cast<Eigen::Index>(x.size()) != inputs.cols())
    throw ArgumentError("grnn: query has " + std::to_string(x.size()) + " features, model has " +
                        std::to_string(inputs.cols()));
  if (inputs.rows() == 0 || inputs.rows() != targets.size()) throw ArgumentError("grnn: empty or ragged model");
  if (!(sigma > 0)) throw ArgumentError("grnn: sigma must be positive");

  const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
  double num = 0, den = 0;
  double nearest_d2 = std::numeric_limits<double>::infinity();
  Eigen::Index nearest = 0;
  for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
    double d2 = 0;
    for (Eigen::Index j = 0; j < inputs.cols(); ++j) {
      const double diff = x[static_cast<std::size_t>(j)] - inputs(i, j);
      d2 += diff * diff;
    }
    const double k = std::exp(-d2 * inv_two_sigma2);
    num += targets(i) * k;
    den += k;
    if (d2 < nearest_d2) {
      nearest_d2 = d2;
      nearest = i;
    }
  }
  if (den == 0) return targets(nearest);
  return num / den;
}

double grnn_predict(const GrnnModel& model, std::span<const double> x) {
  return kernel_regression(model.inputs, model.targets, model.sigma, x);
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0) || !(hi >= lo) || count == 0) throw ArgumentError("log_spaced: need 0 < lo <= hi, count > 0");
  if (count == 1) return {lo};
  std::vector<double> out(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

void CvConfig::validate() const {
  if (folds < 2) throw ArgumentError("folds must be at least 2");
  if (sigma_grid.empty()) throw ArgumentError("sigma grid is empty");
  for (std::size_t i = 0; i < sigma_grid.size(); ++i) {
    if (!(sigma_grid[i] > 0) || !std::isfinite(sigma_grid[i]))
      throw ArgumentError("sigma grid values must be positive and finite");
    if (i && !(sigma_grid[i] > sigma_grid[i - 1])) throw ArgumentError("sigma grid must be strictly ascending");
  }
  if (!(split_fraction > 0 && split_fraction < 1)) throw ArgumentError("split fraction must be in (0, 1)");
  if (!std::isfinite(decision_threshold)) throw ArgumentError("decision threshold must be finite");
}

namespace {

void check_finite(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (!X.allFinite() || !y.allFinite()) throw DataError("grnn: non-finite input value");
}

// Mean over folds of the held-out MSE for one sigma.
double fold_mse(const Eigen::MatrixXd& Xn, const Eigen::VectorXd& y, std::size_t folds, double sigma) {
  const auto n = static_cast<std::size_t>(Xn.rows());
  double total = 0;
  std::vector<double> x(static_cast<std::size_t>(Xn.cols()));
  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t lo = f * n / folds;
    const std::size_t hi = (f + 1) * n / folds;
    const auto train_n = static_cast<Eigen::Index>(n - (hi - lo));
    Eigen::MatrixXd tx(train_n, Xn.cols());
    Eigen::VectorXd ty(train_n);
    Eigen::Index r = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i >= lo && i < hi) continue;
      tx.row(r) = Xn.row(static_cast<Eigen::Index>(i));
      ty(r++) = y(static_cast<Eigen::Index>(i));
    }
    double se = 0;
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t j = 0; j < x.size(); ++j) x[j] = Xn(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const double e = y(static_cast<Eigen::Index>(i)) - kernel_regression(tx, ty, sigma, x);
      se += e * e;
    }
    total += se / static_cast<double>(hi - lo);
  }
  return total / static_cast<double>(folds);
}

}  // namespace

CvResult cross_validate(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const CvConfig& config) {
  config.validate();
  if (X.rows() != y.size()) throw ArgumentError("train_cv: X/y row mismatch");
  if (X.cols() < 1) throw ArgumentError("train_cv: need at least one feature");
  if (static_cast<std::size_t>(X.rows()) < config.folds)
    throw ArgumentError("train_cv: " + std::to_string(X.rows()) + " samples for " +
                        std::to_string(config.folds) + " folds");
  check_finite(X, y);

  CvResult out;
  out.model.ranges = indicators::fit_ranges(X);
  out.model.inputs = indicators::apply_ranges(X, out.model.ranges);
  out.model.targets = y;

  const auto& grid = config.sigma_grid;
  out.cv_mse.assign(grid.size(), 0.0);
  const std::size_t workers = std::clamp<std::size_t>(config.threads, 1, grid.size());
  if (workers == 1) {
    for (std::size_t s = 0; s < grid.size(); ++s) out.cv_mse[s] = fold_mse(out.model.inputs, y, config.folds, grid[s]);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t s = w; s < grid.size(); s += workers)
          out.cv_mse[s] = fold_mse(out.model.inputs, y, config.folds, grid[s]);
      });
  }

  out.best_index = 0;
  for (std::size_t s = 1; s < grid.size(); ++s)
    if (out.cv_mse[s] < out.cv_mse[out.best_index]) out.best_index = s;
  out.model.sigma = grid[out.best_index];
  return out;
}

GrnnModel train_cv(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const CvConfig& config) {
  return cross_validate(X, y, config).model;
}

EvalReport evaluate(const GrnnModel& model, const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double threshold) {
  if (X.rows() != y.size()) throw ArgumentError("evaluate: X/y row mismatch");
  if (X.rows() < 1) throw ArgumentError("evaluate: no samples");
  if (static_cast<std::size_t>(X.cols()) != model.ranges.size()) throw ArgumentError("evaluate: dimension mismatch");

  EvalReport rep;
  rep.total = static_cast<std::size_t>(X.rows());
  double se = 0;
  std::vector<double> raw(static_cast<std::size_t>(X.cols()));
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) raw[static_cast<std::size_t>(j)] = X(i, j);
    const double score = grnn_predict(model, model.normalize(raw));
    const double label = score >= threshold ? 1.0 : 0.0;
    se += (y(i) - score) * (y(i) - score);
    if (label == y(i)) ++rep.correct;
    rep.predictions.push_back({y(i), label, score});
  }
  rep.mse = se / static_cast<double>(rep.total);
  rep.acc = static_cast<double>(rep.correct) / static_cast<double>(rep.total);
  return rep;
}

FitReport fit_and_evaluate(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const CvConfig& config) {
  config.validate();
  if (X.rows() != y.size()) throw ArgumentError("fit_and_evaluate: X/y row mismatch");
  const auto n = static_cast<std::size_t>(X.rows());
  const auto train = static_cast<std::size_t>(std::floor(config.split_fraction * static_cast<double>(n)));
  if (train < config.folds || train >= n)
    throw ArgumentError("fit_and_evaluate: split of " + std::to_string(n) + " samples leaves " +
                        std::to_string(train) + " for training and " + std::to_string(n - train) +
                        " for prediction");
  FitReport rep;
  rep.train_size = train;
  const auto t = static_cast<Eigen::Index>(train);
  const auto rest = static_cast<Eigen::Index>(n - train);
  rep.cv = cross_validate(X.topRows(t), y.head(t), config);
  rep.test = evaluate(rep.cv.model, X.bottomRows(rest), y.tail(rest), config.decision_threshold);
  return rep;
}

Eigen::MatrixXd to_matrix(std::span<const momentum::NamedColumn> columns) {
  if (columns.empty()) return {};
  const auto n = static_cast<Eigen::Index>(columns.front().values.size());
  Eigen::MatrixXd m(n, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (static_cast<Eigen::Index>(columns[j].values.size()) != n)
      throw ArgumentError("column '" + columns[j].name + "' has a different length");
    for (Eigen::Index i = 0; i < n; ++i) m(i, static_cast<Eigen::Index>(j)) = columns[j].values[static_cast<std::size_t>(i)];
  }
  return m;
}

Eigen::MatrixXd base_features(std::span<const momentum::MomentumSample> samples) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(samples.size()), 4);
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t k = 0; k < 4; ++k) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = samples[i].feature(k);
  return m;
}

Eigen::VectorXd labels(std::span<const momentum::MomentumSample> samples) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) y(static_cast<Eigen::Index>(i)) = samples[i].omega;
  return y;
}

std::vector<RankedFeature> rank_extras_by_correlation(std::span<const momentum::NamedColumn> extras,
                                                      std::span<const double> omega) {
  std::vector<RankedFeature> out;
  for (std::size_t j = 0; j < extras.size(); ++j) {
    if (extras[j].values.size() != omega.size())
      throw ArgumentError("feature '" + extras[j].name + "' length differs from omega");
    RankedFeature f{extras[j].name, std::nullopt, j};
    try {
      f.r = momentum::pearson(extras[j].values, omega);
    } catch (const ArgumentError&) {
      // constant column: ranked last
    }
    out.push_back(std::move(f));
  }
  std::stable_sort(out.begin(), out.end(), [](const RankedFeature& a, const RankedFeature& b) {
    if (a.r.has_value() != b.r.has_value()) return a.r.has_value();
    return a.r && std::abs(*a.r) > std::abs(*b.r);
  });
  return out;
}

SweepResult expand_features(std::span<const momentum::NamedColumn> base,
                            std::span<const momentum::NamedColumn> extras_ranked, std::span<const double> y,
                            const CvConfig& config) {
  if (extras_ranked.empty()) throw ArgumentError("expand_features: no extra features");
  Eigen::VectorXd target(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) target(static_cast<Eigen::Index>(i)) = y[i];

  std::vector<momentum::NamedColumn> cols(base.begin(), base.end());
  SweepResult out;
  for (std::size_t t = 0; t <= extras_ranked.size(); ++t) {
    if (t > 0) cols.push_back(extras_ranked[t - 1]);
    const auto fit = fit_and_evaluate(to_matrix(cols), target, config);
    out.steps.push_back({t ? extras_ranked[t - 1].name : std::string(), cols.size(), fit.test.mse,
                         fit.test.acc, fit.cv.model.sigma});
  }
  for (std::size_t s = 1; s < out.steps.size(); ++s) {
    if (out.steps[s].mse < out.steps[out.best_mse_step].mse) out.best_mse_step = s;
    if (out.steps[s].acc > out.steps[out.best_acc_step].acc) out.best_acc_step = s;
    if (out.steps[s].acc > out.steps[out.best_expanded_acc_step].acc) out.best_expanded_acc_step = s;
  }
  return out;
}

SweepResult expansion_sweep(const ingest::MatchTimeline& timeline, Player player, const CvConfig& config,
                            std::vector<RankedFeature>* ranking) {
  const auto samples = momentum::training_samples(momentum::extract_momentum_samples(timeline, player));
  auto extras = momentum::extra_features(timeline, player);
  for (auto& c : extras) c.values.resize(samples.size());
  std::vector<double> omega;
  for (const auto& s : samples) omega.push_back(s.omega);

  auto ranked = rank_extras_by_correlation(extras, omega);
  std::vector<momentum::NamedColumn> ordered;
  for (const auto& f : ranked) ordered.push_back(extras[f.column]);
  std::vector<momentum::NamedColumn> base(4);
  for (std::size_t k = 0; k < 4; ++k) {
    base[k].name = momentum::kSampleLabels[k];
    for (const auto& s : samples) base[k].values.push_back(s.feature(k));
  }
  if (ranking) *ranking = std::move(ranked);
  return expand_features(base, ordered, omega, config);
}

}  // namespace tennis::grnn
