#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tennis/ingest.hpp"

namespace tennis::indicators {

inline constexpr int kIndicatorCount = 22;

/// Player performance indicators x1..x22 for one segment of a match.
struct IndicatorVector {
  int segment = 0;  // 0-based within the match
  int set_no = 0;
  int game_no = 0;  // 0 for per-set segments
  std::array<double, kIndicatorCount> values{};

  /// 1-based indicator access: x(9) is x9.
  double x(int k) const { return values.at(static_cast<std::size_t>(k - 1)); }
  double& x(int k) { return values.at(static_cast<std::size_t>(k - 1)); }
};

enum class Segmentation { per_set, per_game };

struct IndicatorOptions {
  /// Replace the printed mean of successive winning-time differences (x3) with their variance.
  bool x3_as_variance = false;
};

/// Indicators over an arbitrary run of points. `durations[i]` is the playing time of points[i].
IndicatorVector indicators_over(std::span<const ingest::PointRecord> points,
                                std::span<const double> durations, Player player,
                                const IndicatorOptions& options = {},
                                std::vector<std::string>* warnings = nullptr);

/// Seconds between each point and the previous one in the match (first point: its own clock).
std::vector<double> point_durations(const ingest::MatchTimeline& timeline);

std::vector<IndicatorVector> compute_indicators(const ingest::MatchTimeline& timeline, Player player,
                                                Segmentation segmentation = Segmentation::per_set,
                                                const IndicatorOptions& options = {},
                                                std::vector<std::string>* warnings = nullptr);

/// Smaller-is-better to larger-is-better: (max - x) / (max - min). Throws on a degenerate range.
std::vector<double> positivize(std::span<const double> values);

struct MinMaxRange {
  double min = 0;
  double max = 0;

  /// Constant ranges map everything to 0.5.
  double apply(double v) const { return max > min ? (v - min) / (max - min) : 0.5; }
};

std::vector<MinMaxRange> fit_ranges(const Eigen::MatrixXd& matrix);
Eigen::MatrixXd apply_ranges(const Eigen::MatrixXd& matrix, std::span<const MinMaxRange> ranges);

/// Column-wise (x - min) / (max - min); constant columns become 0.5.
Eigen::MatrixXd normalize_minmax(const Eigen::MatrixXd& matrix);

}  // namespace tennis::indicators
