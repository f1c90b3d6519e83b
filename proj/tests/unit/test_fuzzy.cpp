#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "simulator.hpp"
#include "tennis/error.hpp"
#include "tennis/fuzzy.hpp"

namespace fz = tennis::fuzzy;
using fz::MembershipVector;
using tennis::Player;

namespace {

MembershipVector e(std::size_t g) {
  MembershipVector v{};
  v[g] = 1;
  return v;
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

tennis::ingest::MatchTimeline mirrored(tennis::ingest::MatchTimeline m) {
  for (auto& r : m.records) {
    std::swap(r.player1, r.player2);
    std::swap(r.p1_sets, r.p2_sets);
    std::swap(r.p1_games, r.p2_games);
    std::swap(r.p1_score, r.p2_score);
    std::swap(r.p1_points_won, r.p2_points_won);
    r.point_victor = 3 - r.point_victor;
    if (r.server) r.server = 3 - *r.server;
    std::swap(r.p1_ace, r.p2_ace);
    std::swap(r.p1_winner, r.p2_winner);
    std::swap(r.p1_double_fault, r.p2_double_fault);
    std::swap(r.p1_unf_err, r.p2_unf_err);
    std::swap(r.p1_net_pt, r.p2_net_pt);
    std::swap(r.p1_net_pt_won, r.p2_net_pt_won);
    std::swap(r.p1_break_pt_missed, r.p2_break_pt_missed);
    std::swap(r.p1_distance_run, r.p2_distance_run);
  }
  return m;
}

}  // namespace

TEST(EntropyWeights, HandDerivedTwoByTwo) {
  Eigen::MatrixXd z(2, 2);
  z << 1, 1, 1, 3;
  const auto w = fz::entropy_weights(z);
  EXPECT_NEAR(w[0], 0.0, 1e-10);
  EXPECT_NEAR(w[1], 1.0, 1e-10);
}

TEST(EntropyWeights, IdenticalColumnsShareEqually) {
  Eigen::MatrixXd z(3, 2);
  z << 1, 1, 2, 2, 5, 5;
  const auto w = fz::entropy_weights(z);
  EXPECT_NEAR(w[0], 0.5, 1e-15);
  EXPECT_NEAR(w[1], 0.5, 1e-15);
}

TEST(EntropyWeights, AllUniformFallsBackToEqualWeights) {
  Eigen::MatrixXd z = Eigen::MatrixXd::Constant(4, 2, 3.0);
  std::vector<std::string> warnings;
  const auto w = fz::entropy_weights(z, &warnings);
  EXPECT_EQ(w, (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(EntropyWeights, Preconditions) {
  EXPECT_THROW(fz::entropy_weights(Eigen::MatrixXd::Ones(1, 2)), tennis::ArgumentError);
  Eigen::MatrixXd zero(2, 2);
  zero << 0, 1, 0, 2;
  EXPECT_THROW(fz::entropy_weights(zero), tennis::ArgumentError);
  Eigen::MatrixXd negative(2, 1);
  negative << -1, 2;
  EXPECT_THROW(fz::entropy_weights(negative), tennis::ArgumentError);
}

TEST(EntropyWeights, SumToOneAndIgnoreColumnScale) {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 30);
    const int k = 1 + static_cast<int>(rng() % 6);
    Eigen::MatrixXd z(n, k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < k; ++j) z(i, j) = u(rng) + (j == 0 ? 0.1 : 0.0);
    const auto w = fz::entropy_weights(z);
    EXPECT_NEAR(sum(w), 1.0, 1e-12);
    for (double x : w) EXPECT_GE(x, 0);
    Eigen::MatrixXd scaled = z;
    for (int j = 0; j < k; ++j) scaled.col(j) *= 0.01 + 50 * u(rng);
    const auto ws = fz::entropy_weights(scaled);
    for (int j = 0; j < k; ++j) EXPECT_NEAR(ws[static_cast<std::size_t>(j)], w[static_cast<std::size_t>(j)], 1e-12);
  }
}

TEST(Membership, LowAndHighGrades) {
  EXPECT_EQ(fz::evaluate_membership(0.02).normalized, e(0));
  EXPECT_EQ(fz::evaluate_membership(0.9).normalized, e(6));
  EXPECT_EQ(fz::evaluate_membership(0.9).raw, e(6));
}

TEST(Membership, OverlappingRampsAreAllEvaluated) {
  // At U = 0.32 the falling ramp of R2, the plateau of R3 and the rising ramp of R4 overlap.
  const auto m = fz::evaluate_membership(0.32);
  EXPECT_NEAR(m.raw[1], 0.6, 1e-12);
  EXPECT_NEAR(m.raw[2], 1.0, 1e-12);
  EXPECT_NEAR(m.raw[3], 0.07 / 0.15, 1e-12);
  const double total = 0.6 + 1.0 + 0.07 / 0.15;
  EXPECT_NEAR(m.normalized[1], 0.6 / total, 1e-12);
  EXPECT_NEAR(m.normalized[2], 1.0 / total, 1e-12);
  EXPECT_NEAR(m.normalized[3], (0.07 / 0.15) / total, 1e-12);
  EXPECT_FALSE(m.fallback);
}

TEST(Membership, ShortFifthGradeRampIsVerbatim) {
  const auto m = fz::evaluate_membership(0.51);
  EXPECT_NEAR(m.raw[4], 0.1, 1e-12);
  EXPECT_NEAR(m.raw[3], 1.0, 1e-12);
}

TEST(Membership, GridIsTotal) {
  std::size_t fallbacks = 0;
  for (int i = 0; i <= 10000; ++i) {
    const double u = i / 10000.0;
    const auto m = fz::evaluate_membership(u);
    for (double r : m.raw) EXPECT_GE(r, 0.0) << u;
    const double raw_sum = std::accumulate(m.raw.begin(), m.raw.end(), 0.0);
    EXPECT_EQ(raw_sum > 0, !m.fallback) << u;
    EXPECT_NEAR(std::accumulate(m.normalized.begin(), m.normalized.end(), 0.0), 1.0, 1e-12) << u;
    fallbacks += m.fallback;
  }
  EXPECT_EQ(fallbacks, 1u);  // only U = 1, beyond R7's half-open interval
  EXPECT_EQ(fz::evaluate_membership(1.0).normalized, e(6));
}

TEST(Membership, OutsideUnitIntervalIsArgumentError) {
  EXPECT_THROW(fz::evaluate_membership(-0.01), tennis::ArgumentError);
  EXPECT_THROW(fz::evaluate_membership(1.01), tennis::ArgumentError);
  EXPECT_THROW(fz::evaluate_membership(std::nan("")), tennis::ArgumentError);
}

TEST(Composition, FirstLevelIsWeightedAverage) {
  const std::vector<MembershipVector> one = {e(3)};
  EXPECT_EQ(fz::first_level_eval(std::vector<double>{1.0}, one), e(3));
  const std::vector<MembershipVector> ends = {e(0), e(6)};
  const auto b = fz::first_level_eval(std::vector<double>{0.5, 0.5}, ends);
  EXPECT_EQ(b, (MembershipVector{0.5, 0, 0, 0, 0, 0, 0.5}));
  const std::vector<MembershipVector> rows = {e(1), e(2)};
  const auto c = fz::first_level_eval(std::vector<double>{0.2, 0.8}, rows);
  EXPECT_EQ(c, (MembershipVector{0, 0.2, 0.8, 0, 0, 0, 0}));
}

TEST(Composition, FirstLevelRejectsBadShapes) {
  const std::vector<MembershipVector> rows = {e(1), e(2)};
  EXPECT_THROW(fz::first_level_eval(std::vector<double>{1.0}, rows), tennis::ArgumentError);
  EXPECT_THROW(fz::first_level_eval(std::vector<double>{0.3, 0.3}, rows), tennis::ArgumentError);
}

TEST(Composition, SecondLevelWithFirstLevelWeights) {
  const fz::FuzzyHierarchy h;
  const std::vector<MembershipVector> rows = {e(0), e(1), e(2), e(3)};
  const auto b = fz::second_level_eval(h.first_level, rows);
  const MembershipVector want{0.15, 0.25, 0.35, 0.25, 0, 0, 0};
  for (std::size_t g = 0; g < 7; ++g) EXPECT_NEAR(b[g], want[g], 1e-15);
  const std::vector<MembershipVector> same(4, MembershipVector{0.1, 0.2, 0.3, 0.4, 0, 0, 0});
  const auto s = fz::second_level_eval(h.first_level, same);
  for (std::size_t g = 0; g < 7; ++g) EXPECT_NEAR(s[g], same[0][g], 1e-15);
  const std::vector<double> pick = {0, 0, 1, 0};
  EXPECT_EQ(fz::second_level_eval(pick, rows), e(2));
  EXPECT_THROW(fz::second_level_eval(pick, std::vector<MembershipVector>{e(0)}), tennis::ArgumentError);
}

TEST(Composition, SecondLevelStaysInConvexHull) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const fz::FuzzyHierarchy h;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<MembershipVector> rows(4);
    for (auto& r : rows) {
      double t = 0;
      for (auto& x : r) t += x = u(rng);
      for (auto& x : r) x /= t;
    }
    const auto b = fz::second_level_eval(h.first_level, rows);
    for (std::size_t g = 0; g < 7; ++g) {
      double lo = 1, hi = 0;
      for (const auto& r : rows) lo = std::min(lo, r[g]), hi = std::max(hi, r[g]);
      EXPECT_GE(b[g], lo - 1e-15);
      EXPECT_LE(b[g], hi + 1e-15);
    }
  }
}

TEST(Score, GradeWeightsAreApplied) {
  EXPECT_EQ(fz::momentum_score(e(0)), 10);
  EXPECT_EQ(fz::momentum_score(e(6)), 100);
  EXPECT_DOUBLE_EQ(fz::momentum_score({0.15, 0.25, 0.35, 0.25, 0, 0, 0}), 38);
  EXPECT_THROW(fz::momentum_score({0.5, 0, 0, 0, 0, 0, 0}), tennis::ArgumentError);
}

TEST(Score, ShiftingMassUpNeverLowersTheScore) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    MembershipVector b{};
    double t = 0;
    for (auto& x : b) t += x = u(rng);
    for (auto& x : b) x /= t;
    const auto from = rng() % 6;
    const auto to = from + 1 + rng() % (6 - from);
    MembershipVector moved = b;
    const double mass = moved[from] * u(rng);
    moved[from] -= mass;
    moved[to] += mass;
    EXPECT_GE(fz::momentum_score(moved), fz::momentum_score(b) - 1e-12);
    EXPECT_GE(fz::momentum_score(b), 10 - 1e-12);
    EXPECT_LE(fz::momentum_score(b), 100 + 1e-12);
  }
}

TEST(MatchMomentum, WinnerOfEveryPointScoresHigher) {
  tennis::testing::SimOptions o;
  o.seed = 2;
  o.p1_serve_win = 1.0;
  o.p2_serve_win = 0.0;
  o.second_serve_penalty = 0.0;
  o.max_points = 60;
  auto m = tennis::testing::simulate_match(o);
  for (auto& r : m.records) ASSERT_EQ(r.point_victor, 1);
  const auto mm = fz::match_momentum(m);
  ASSERT_EQ(mm.player1.size(), m.records.size());
  for (std::size_t t = 0; t < m.records.size(); ++t) EXPECT_GT(mm.player1[t].score, mm.player2[t].score) << t;
}

TEST(MatchMomentum, RelabellingPlayersSwapsSeries) {
  tennis::testing::SimOptions o;
  o.seed = 6;
  const auto m = tennis::testing::simulate_match(o);
  const auto a = fz::match_momentum(m);
  const auto b = fz::match_momentum(mirrored(m));
  for (std::size_t t = 0; t < a.player1.size(); ++t) {
    EXPECT_NEAR(a.player1[t].score, b.player2[t].score, 1e-9);
    EXPECT_NEAR(a.player2[t].score, b.player1[t].score, 1e-9);
  }
}

TEST(MatchMomentum, ScoresStayInRangeAndAreDeterministic) {
  for (std::uint64_t seed : {1u, 5u, 8u}) {
    tennis::testing::SimOptions o;
    o.seed = seed;
    const auto m = tennis::testing::simulate_match(o);
    const auto a = fz::match_momentum(m);
    const auto b = fz::match_momentum(m);
    for (std::size_t t = 0; t < a.player1.size(); ++t) {
      for (const auto* s : {&a.player1[t], &a.player2[t]}) {
        EXPECT_GE(s->score, 10);
        EXPECT_LE(s->score, 100);
      }
      EXPECT_EQ(a.player1[t].score, b.player1[t].score);
      EXPECT_EQ(a.player2[t].index, t);
    }
  }
}

TEST(MatchMomentum, SeriesMatchesMatchComputation) {
  tennis::testing::SimOptions o;
  o.max_points = 80;
  const auto m = tennis::testing::simulate_match(o);
  fz::MomentumOptions opts;
  opts.window = 15;
  const auto mm = fz::match_momentum(m, opts);
  const auto s = fz::momentum_series(m, Player::two, 15);
  ASSERT_EQ(s.size(), mm.player2.size());
  for (std::size_t t = 0; t < s.size(); ++t) EXPECT_EQ(s[t].score, mm.player2[t].score);
}

TEST(MatchMomentum, WindowLongerThanMatchIsArgumentError) {
  tennis::testing::SimOptions o;
  o.max_points = 10;
  const auto m = tennis::testing::simulate_match(o);
  EXPECT_THROW(fz::momentum_series(m, Player::one, 11), tennis::ArgumentError);
  EXPECT_THROW(fz::momentum_series(m, Player::one, 0), tennis::ArgumentError);
  EXPECT_EQ(fz::momentum_series(m, Player::one, 10).size(), 10u);
}

TEST(Hierarchy, WeightsAndGroups) {
  const fz::FuzzyHierarchy h;
  EXPECT_NEAR(std::accumulate(h.first_level.begin(), h.first_level.end(), 0.0), 1.0, 1e-12);
  EXPECT_EQ(h.indicator_list(), (std::vector<int>{21, 22, 9, 10, 11, 12, 1, 2, 5, 4, 7}));
  EXPECT_TRUE(h.is_smaller_better(2));
  EXPECT_FALSE(h.is_smaller_better(1));
}
