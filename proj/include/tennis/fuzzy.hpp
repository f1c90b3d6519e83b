#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tennis/indicators.hpp"
#include "tennis/ingest.hpp"

namespace tennis::fuzzy {

inline constexpr std::size_t kGrades = 7;

/// Degrees of belonging to {very weak, weak, weaker, moderate, stronger, strong, very strong}.
using MembershipVector = std::array<double, kGrades>;

inline constexpr std::array<const char*, kGrades> kGradeNames = {
    "very weak", "weak", "weaker", "moderate", "stronger", "strong", "very strong"};

/// Score attached to each grade.
inline constexpr std::array<double, kGrades> kGradeScores = {10, 30, 40, 60, 70, 80, 100};

struct FactorGroup {
  std::string name;
  std::vector<int> indicators;  // 1-based x indices
};

/// Two-level factor tree: fixed first-level weights over four groups of indicators.
struct FuzzyHierarchy {
  std::array<double, 4> first_level{0.15, 0.25, 0.35, 0.25};
  std::array<FactorGroup, 4> groups{{
      {"physical fitness", {21, 22}},
      {"serving proficiency", {9, 10, 11, 12}},
      {"winning capability", {1, 2}},
      {"overall score", {5, 4, 7}},
  }};
  /// Indicators where smaller is better; positivized before grading.
  std::vector<int> smaller_is_better{2};

  /// All indicators of the tree in group order.
  std::vector<int> indicator_list() const;
  bool is_smaller_better(int indicator) const;
};

/// Entropy weight method. Rows are samples, columns indicators; entries must be non-negative.
/// Throws ArgumentError on a zero-sum column. If every column is uniform the weights are equal.
std::vector<double> entropy_weights(const Eigen::MatrixXd& z, std::vector<std::string>* warnings = nullptr);

struct Membership {
  MembershipVector raw{};
  MembershipVector normalized{};
  /// True when no printed branch covers U and the nearest branch was used instead.
  bool fallback = false;
};

/// Piecewise-linear membership functions R1..R7 of a normalized indicator value U in [0, 1].
Membership evaluate_membership(double u);

/// Weighted-average composition B = W . R.
MembershipVector first_level_eval(std::span<const double> weights, std::span<const MembershipVector> rows);

/// B = A . B_rows, renormalized to sum 1.
MembershipVector second_level_eval(std::span<const double> first_level,
                                   std::span<const MembershipVector> rows);

/// Dot product with kGradeScores. `b` must be a probability vector.
double momentum_score(const MembershipVector& b);

struct MomentumPoint {
  std::size_t index = 0;  // 0-based point index in the match
  int elapsed_seconds = 0;
  Player player = Player::one;
  double score = 0;
};

struct MomentumOptions {
  std::size_t window = 20;
  FuzzyHierarchy hierarchy{};
  indicators::IndicatorOptions indicator_options{};
};

struct MatchMomentum {
  std::vector<MomentumPoint> player1;
  std::vector<MomentumPoint> player2;
  std::size_t membership_fallbacks = 0;
  std::vector<std::string> warnings;
};

/// Momentum score of both players at every point of the match.
MatchMomentum match_momentum(const ingest::MatchTimeline& timeline, const MomentumOptions& options = {});

std::vector<MomentumPoint> momentum_series(const ingest::MatchTimeline& timeline, Player player,
                                           std::size_t window);

}  // namespace tennis::fuzzy
