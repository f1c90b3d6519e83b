#include "tennis/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "tennis/error.hpp"

namespace tennis::fuzzy {

namespace {

enum class Shape { flat, rise, fall };

struct Branch {
  std::size_t grade;  // 0-based
  double lo, hi;      // active on [lo, hi)
  Shape shape;
  double anchor = 0, width = 1;

  double value(double u) const {
    if (!(u >= lo && u < hi)) return 0.0;
    switch (shape) {
      case Shape::flat: return 1.0;
      case Shape::rise: return (u - anchor) / width;
      case Shape::fall: return (anchor - u) / width;
    }
    return 0.0;
  }
  double distance(double u) const { return std::max({lo - u, u - hi, 0.0}); }
};

// R1..R7 exactly as printed, including the short R5 ramp on [0.5, 0.52).
constexpr Branch kBranches[] = {
    {0, 0.0, 0.05, Shape::flat},
    {0, 0.05, 0.065, Shape::fall, 0.065, 0.015},
    {1, 0.06, 0.16, Shape::rise, 0.06, 0.1},
    {1, 0.16, 0.3, Shape::flat},
    {1, 0.3, 0.35, Shape::fall, 0.35, 0.05},
    {2, 0.25, 0.3, Shape::rise, 0.25, 0.05},
    {2, 0.3, 0.35, Shape::flat},
    {2, 0.35, 0.4, Shape::fall, 0.4, 0.05},
    {3, 0.25, 0.4, Shape::rise, 0.25, 0.15},
    {3, 0.4, 0.6, Shape::flat},
    {3, 0.6, 0.75, Shape::fall, 0.75, 0.15},
    {4, 0.6, 0.7, Shape::fall, 0.7, 0.1},
    {4, 0.55, 0.6, Shape::flat},
    {4, 0.5, 0.52, Shape::rise, 0.5, 0.1},
    {5, 0.84, 0.9, Shape::fall, 0.9, 0.06},
    {5, 0.7, 0.84, Shape::flat},
    {5, 0.65, 0.7, Shape::rise, 0.65, 0.05},
    {6, 0.8, 1.0, Shape::flat},
    {6, 0.75, 0.8, Shape::rise, 0.75, 0.05},
};

constexpr double kSumTolerance = 1e-9;

std::vector<double> entropy_weights_impl(const Eigen::MatrixXd& z, bool zero_column_is_uninformative,
                                         std::vector<std::string>* warnings) {
  const Eigen::Index n = z.rows();
  const Eigen::Index k = z.cols();
  if (n < 2) throw ArgumentError("entropy_weights: need at least 2 samples");
  if (k < 1) throw ArgumentError("entropy_weights: no indicators");
  if ((z.array() < 0).any()) throw ArgumentError("entropy_weights: negative entry");

  const double inv_log_n = 1.0 / std::log(static_cast<double>(n));
  std::vector<double> d(static_cast<std::size_t>(k), 0.0);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double total = z.col(j).sum();
    if (total <= 0) {
      if (zero_column_is_uninformative) continue;
      throw ArgumentError("entropy_weights: column " + std::to_string(j) + " sums to zero");
    }
    double h = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double p = z(i, j) / total;
      if (p > 0) h += p * std::log(p);
    }
    const double e = -inv_log_n * h;
    double dj = 1.0 - e;
    if (std::abs(dj) < 1e-12) dj = 0.0;  // uniform column up to rounding
    d[static_cast<std::size_t>(j)] = std::max(dj, 0.0);
  }

  const double total = std::accumulate(d.begin(), d.end(), 0.0);
  if (total <= 0) {
    if (warnings) warnings->push_back("entropy_weights: all indicators uniform, using equal weights");
    return std::vector<double>(d.size(), 1.0 / static_cast<double>(d.size()));
  }
  for (double& v : d) v /= total;
  return d;
}

}  // namespace

std::vector<int> FuzzyHierarchy::indicator_list() const {
  std::vector<int> out;
  for (const auto& g : groups) out.insert(out.end(), g.indicators.begin(), g.indicators.end());
  return out;
}

bool FuzzyHierarchy::is_smaller_better(int indicator) const {
  return std::find(smaller_is_better.begin(), smaller_is_better.end(), indicator) !=
         smaller_is_better.end();
}

std::vector<double> entropy_weights(const Eigen::MatrixXd& z, std::vector<std::string>* warnings) {
  return entropy_weights_impl(z, false, warnings);
}

Membership evaluate_membership(double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw ArgumentError("evaluate_membership: U outside [0, 1]");
  Membership m;
  for (const auto& b : kBranches) m.raw[b.grade] += b.value(u);

  const double total = std::accumulate(m.raw.begin(), m.raw.end(), 0.0);
  if (total > 0) {
    for (std::size_t g = 0; g < kGrades; ++g) m.normalized[g] = m.raw[g] / total;
    return m;
  }
  // Coverage gap (U = 1): take the nearest printed branch.
  const Branch* nearest = &kBranches[0];
  for (const auto& b : kBranches)
    if (b.distance(u) < nearest->distance(u)) nearest = &b;
  m.normalized[nearest->grade] = 1.0;
  m.fallback = true;
  return m;
}

MembershipVector first_level_eval(std::span<const double> weights, std::span<const MembershipVector> rows) {
  if (weights.empty() || weights.size() != rows.size())
    throw ArgumentError("first_level_eval: " + std::to_string(weights.size()) + " weights for " +
                        std::to_string(rows.size()) + " membership rows");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > kSumTolerance ||
      std::any_of(weights.begin(), weights.end(), [](double w) { return w < 0; }))
    throw ArgumentError("first_level_eval: weights must be non-negative and sum to 1");
  MembershipVector b{};
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t g = 0; g < kGrades; ++g) b[g] += weights[i] * rows[i][g];
  return b;
}

MembershipVector second_level_eval(std::span<const double> first_level,
                                   std::span<const MembershipVector> rows) {
  if (first_level.empty() || first_level.size() != rows.size())
    throw ArgumentError("second_level_eval: " + std::to_string(first_level.size()) + " weights for " +
                        std::to_string(rows.size()) + " rows");
  MembershipVector b{};
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t g = 0; g < kGrades; ++g) b[g] += first_level[i] * rows[i][g];
  const double total = std::accumulate(b.begin(), b.end(), 0.0);
  if (total > 0)
    for (double& v : b) v /= total;
  return b;
}

double momentum_score(const MembershipVector& b) {
  const double total = std::accumulate(b.begin(), b.end(), 0.0);
  if (std::abs(total - 1.0) > kSumTolerance || std::any_of(b.begin(), b.end(), [](double v) { return v < 0; }))
    throw ArgumentError("momentum_score: membership vector is not normalized");
  double s = 0;
  for (std::size_t g = 0; g < kGrades; ++g) s += kGradeScores[g] * b[g];
  return s;
}

MatchMomentum match_momentum(const ingest::MatchTimeline& timeline, const MomentumOptions& options) {
  const auto& recs = timeline.records;
  const std::size_t n = recs.size();
  const std::size_t w = options.window;
  if (n == 0) throw ArgumentError("match_momentum: empty timeline");
  if (w == 0 || w > n)
    throw ArgumentError("momentum window " + std::to_string(w) + " must be in [1, " + std::to_string(n) + "]");

  const auto& tree = options.hierarchy;
  const std::vector<int> inds = tree.indicator_list();
  const auto cols = static_cast<Eigen::Index>(inds.size());
  const auto durations = indicators::point_durations(timeline);

  // Rows [0, n) belong to player 1, rows [n, 2n) to player 2.
  Eigen::MatrixXd raw(static_cast<Eigen::Index>(2 * n), cols);
  std::map<std::string, std::size_t> warning_counts;
  for (Player p : {Player::one, Player::two}) {
    const std::size_t base = p == Player::one ? 0 : n;
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t begin = t + 1 >= w ? t + 1 - w : 0;
      std::vector<std::string> local;
      const auto v = indicators::indicators_over(std::span(recs).subspan(begin, t + 1 - begin),
                                                 std::span(durations).subspan(begin, t + 1 - begin), p,
                                                 options.indicator_options, &local);
      for (auto& msg : local) ++warning_counts[msg];
      for (Eigen::Index c = 0; c < cols; ++c)
        raw(static_cast<Eigen::Index>(base + t), c) = v.x(inds[static_cast<std::size_t>(c)]);
    }
  }

  Eigen::MatrixXd grade_input(raw.rows(), cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    const double lo = raw.col(c).minCoeff();
    const double hi = raw.col(c).maxCoeff();
    if (hi == lo) {
      grade_input.col(c).setConstant(0.5);
    } else if (tree.is_smaller_better(inds[static_cast<std::size_t>(c)])) {
      const Eigen::VectorXd column = raw.col(c);
      const auto pos = indicators::positivize(std::span(column.data(), static_cast<std::size_t>(column.size())));
      for (Eigen::Index i = 0; i < raw.rows(); ++i) grade_input(i, c) = pos[static_cast<std::size_t>(i)];
    } else {
      grade_input.col(c) = (raw.col(c).array() - lo) / (hi - lo);
    }
  }
  grade_input = grade_input.cwiseMax(0.0).cwiseMin(1.0);

  MatchMomentum out;
  for (const auto& [msg, count] : warning_counts)
    out.warnings.push_back(timeline.match_id + ": " + msg + " (" + std::to_string(count) + " windows)");

  // Column offsets of each group inside the indicator list.
  std::array<std::vector<Eigen::Index>, 4> group_cols;
  {
    Eigen::Index c = 0;
    for (std::size_t g = 0; g < 4; ++g)
      for (std::size_t k = 0; k < tree.groups[g].indicators.size(); ++k) group_cols[g].push_back(c++);
  }

  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t begin = t + 1 >= w ? t + 1 - w : 0;
    const std::size_t len = t + 1 - begin;
    // Entropy sample: both players' rows over the trailing window.
    std::array<std::vector<double>, 4> weights;
    for (std::size_t g = 0; g < 4; ++g) {
      Eigen::MatrixXd z(static_cast<Eigen::Index>(2 * len), static_cast<Eigen::Index>(group_cols[g].size()));
      for (std::size_t s = 0; s < len; ++s)
        for (std::size_t k = 0; k < group_cols[g].size(); ++k) {
          const auto c = group_cols[g][k];
          z(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(k)) =
              grade_input(static_cast<Eigen::Index>(begin + s), c);
          z(static_cast<Eigen::Index>(len + s), static_cast<Eigen::Index>(k)) =
              grade_input(static_cast<Eigen::Index>(n + begin + s), c);
        }
      weights[g] = entropy_weights_impl(z, true, nullptr);
    }

    for (Player p : {Player::one, Player::two}) {
      const auto row = static_cast<Eigen::Index>((p == Player::one ? 0 : n) + t);
      std::array<MembershipVector, 4> level_one;
      for (std::size_t g = 0; g < 4; ++g) {
        std::vector<MembershipVector> rows;
        for (auto c : group_cols[g]) {
          const auto m = evaluate_membership(grade_input(row, c));
          if (m.fallback) ++out.membership_fallbacks;
          rows.push_back(m.normalized);
        }
        level_one[g] = first_level_eval(weights[g], rows);
      }
      const auto b = second_level_eval(tree.first_level, level_one);
      MomentumPoint mp{t, recs[t].elapsed_seconds, p, momentum_score(b)};
      (p == Player::one ? out.player1 : out.player2).push_back(mp);
    }
  }
  if (out.membership_fallbacks)
    out.warnings.push_back(timeline.match_id + ": " + std::to_string(out.membership_fallbacks) +
                           " membership evaluations used the nearest-branch fallback");
  return out;
}

std::vector<MomentumPoint> momentum_series(const ingest::MatchTimeline& timeline, Player player,
                                           std::size_t window) {
  MomentumOptions options;
  options.window = window;
  auto m = match_momentum(timeline, options);
  return player == Player::one ? std::move(m.player1) : std::move(m.player2);
}

}  // namespace tennis::fuzzy
