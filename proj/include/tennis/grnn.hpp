#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tennis/indicators.hpp"
#include "tennis/momentum.hpp"

namespace tennis::grnn {

/// Generalized regression network: one Gaussian pattern unit per training row.
struct GrnnModel {
  Eigen::MatrixXd inputs;   // n x p, normalized
  Eigen::VectorXd targets;  // n
  double sigma = 1.0;
  std::vector<indicators::MinMaxRange> ranges;  // per input column, raw units

  std::vector<double> normalize(std::span<const double> raw) const;
};

/// Nadaraya-Watson estimate sum_i y_i K_i / sum_i K_i with K_i = exp(-|x - X_i|^2 / (2 sigma^2)).
/// If every kernel weight underflows, returns the target of the nearest training row.
double kernel_regression(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, double sigma,
                         std::span<const double> x);

/// `x` must already be normalized with the model's ranges.
double grnn_predict(const GrnnModel& model, std::span<const double> x);

std::vector<double> log_spaced(double lo, double hi, std::size_t count);

struct CvConfig {
  std::size_t folds = 5;
  std::vector<double> sigma_grid = log_spaced(0.01, 2.0, 40);
  double split_fraction = 0.7;
  double decision_threshold = 0.5;
  std::uint64_t seed = 0;
  /// Worker threads for the sigma grid; results do not depend on it.
  std::size_t threads = 1;

  void validate() const;
};

struct CvResult {
  GrnnModel model;
  std::vector<double> cv_mse;  // one per grid sigma
  std::size_t best_index = 0;
};

/// Min-max normalizes X, scores every grid sigma by mean held-out MSE over contiguous folds and
/// keeps the best (smallest sigma on ties).
CvResult cross_validate(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const CvConfig& config);
GrnnModel train_cv(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const CvConfig& config);

struct Prediction {
  double actual = 0;
  double predicted = 0;  // thresholded
  double raw = 0;
};

struct EvalReport {
  double mse = 0;
  double acc = 0;
  std::size_t correct = 0;
  std::size_t total = 0;
  std::vector<Prediction> predictions;
};

/// `X` in raw units; it is normalized with the model's ranges.
EvalReport evaluate(const GrnnModel& model, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                    double threshold);

struct FitReport {
  CvResult cv;
  std::size_t train_size = 0;
  EvalReport test;
};

/// Chronological split: the first `split_fraction` rows train (with CV), the rest are predicted.
FitReport fit_and_evaluate(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const CvConfig& config);

Eigen::MatrixXd to_matrix(std::span<const momentum::NamedColumn> columns);
Eigen::MatrixXd base_features(std::span<const momentum::MomentumSample> samples);
Eigen::VectorXd labels(std::span<const momentum::MomentumSample> samples);

struct RankedFeature {
  std::string name;
  std::optional<double> r;  // empty when undefined
  std::size_t column = 0;   // position in the input list
};

/// Sorted by descending |r|; undefined correlations last. Stable for equal |r|.
std::vector<RankedFeature> rank_extras_by_correlation(std::span<const momentum::NamedColumn> extras,
                                                      std::span<const double> omega);

struct SweepStep {
  std::string added;  // empty for the base step
  std::size_t feature_count = 0;
  double mse = 0;
  double acc = 0;
  double sigma = 0;
};

struct SweepResult {
  std::vector<SweepStep> steps;  // step 0 is the base feature set
  std::size_t best_mse_step = 0;
  std::size_t best_acc_step = 0;
  std::size_t best_expanded_acc_step = 1;  // best ACC among steps with at least one extra
};

/// Greedy expansion: step t trains on the base columns plus the first t ranked extras.
SweepResult expand_features(std::span<const momentum::NamedColumn> base,
                            std::span<const momentum::NamedColumn> extras_ranked,
                            std::span<const double> y, const CvConfig& config);

/// Expansion sweep of one player in one match: base S1..S4 plus the match-so-far extras ranked by
/// |r| with omega. The ranking used is stored in `ranking` when given.
SweepResult expansion_sweep(const ingest::MatchTimeline& timeline, Player player, const CvConfig& config,
                            std::vector<RankedFeature>* ranking = nullptr);

}  // namespace tennis::grnn
