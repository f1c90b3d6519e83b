#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tennis/ingest.hpp"

namespace tennis::momentum {

/// Per-point momentum features of one player and the next-point label.
struct MomentumSample {
  std::size_t index = 0;  // 1-based position in the match
  int elapsed_seconds = 0;
  double s1 = 0;  // sets won so far
  double s2 = 0;  // score difference (own - opponent) when the point starts
  double s3 = 0;  // consecutive points won, reset on a loss
  double s4 = 0;  // points-won difference after the point
  int omega = 0;  // 1 iff the player wins the next point
  bool final_point = false;  // omega copied from this point's own victor

  double feature(std::size_t k) const;  // 0..3 -> s1..s4, 4 -> omega
};

inline constexpr std::array<const char*, 5> kSampleLabels = {"S1", "S2", "S3", "S4", "omega"};

std::vector<MomentumSample> extract_momentum_samples(const ingest::MatchTimeline& timeline, Player player);

/// Drops the final point, whose label has no next point behind it.
std::vector<MomentumSample> training_samples(std::span<const MomentumSample> samples);

/// Product-moment correlation. Throws ArgumentError on length mismatch, n < 2 or zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

struct CorrelationMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd r;          // NaN where undefined
  std::vector<bool> defined;  // per label: column had non-zero variance
};

CorrelationMatrix correlation_matrix(std::span<const std::string> labels,
                                     std::span<const std::vector<double>> columns,
                                     std::vector<std::string>* warnings = nullptr);

/// 5 x 5 matrix over (S1, S2, S3, S4, omega).
CorrelationMatrix correlation_matrix(std::span<const MomentumSample> samples,
                                     std::vector<std::string>* warnings = nullptr);

enum class Turn { loss_to_win, win_to_loss };
const char* to_string(Turn t);

struct TurningOptions {
  std::size_t lookback = 50;
  std::size_t run_min = 3;
};

struct TurningPoint {
  std::size_t index = 0;  // 1-based sample index where the new run starts
  Turn direction = Turn::loss_to_win;
  std::vector<MomentumSample> window;  // up to `lookback` samples before it, then the point itself
  bool truncated = false;
};

/// A turning point is the first sample of a run of >= run_min equal omegas that directly follows
/// a run of >= run_min of the opposite value.
std::vector<TurningPoint> detect_turning_points(std::span<const MomentumSample> samples,
                                                const TurningOptions& options = {},
                                                std::vector<std::string>* warnings = nullptr);

enum class VarianceKind { sample, population };

struct DescriptiveStats {
  double mean = 0;
  double mode = 0;
  double variance = 0;
  double trimmed_mean = 0;
};

/// Mean, mode (smallest on ties), variance and the mean after dropping 15% of points per tail
/// (floor counts).
DescriptiveStats describe(std::span<const double> data, VarianceKind variance = VarianceKind::sample);

struct SampleGroup {
  std::string name;
  std::vector<MomentumSample> samples;
};

struct GroupStats {
  std::string name;
  std::size_t count = 0;
  std::array<DescriptiveStats, 4> features;  // S1..S4
};

struct TurningPointStats {
  std::vector<GroupStats> groups;
};

TurningPointStats turning_point_stats(std::span<const SampleGroup> groups,
                                      VarianceKind variance = VarianceKind::sample);

/// Pools turning-point windows by direction. Directions without turning points are omitted.
std::vector<SampleGroup> group_windows(std::span<const TurningPoint> points);

struct NamedColumn {
  std::string name;
  std::vector<double> values;
};

/// Match-so-far indicators aligned with extract_momentum_samples: value t covers points 1..t.
std::vector<NamedColumn> extra_features(const ingest::MatchTimeline& timeline, Player player);

}  // namespace tennis::momentum
