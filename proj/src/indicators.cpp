#include "tennis/indicators.hpp"

#include <algorithm>
#include <numeric>

#include "tennis/error.hpp"

namespace tennis::indicators {

namespace {

using ingest::Flag;
using ingest::PointRecord;

double mean(std::span<const double> v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double population_variance(std::span<const double> v, double mu) {
  if (v.empty()) return 0.0;
  double s = 0;
  for (double x : v) s += (x - mu) * (x - mu);
  return s / static_cast<double>(v.size());
}

void warn(std::vector<std::string>* warnings, std::string msg) {
  if (warnings) warnings->push_back(std::move(msg));
}

}  // namespace

std::vector<double> point_durations(const ingest::MatchTimeline& timeline) {
  std::vector<double> d;
  d.reserve(timeline.records.size());
  for (std::size_t i = 0; i < timeline.records.size(); ++i) {
    const int now = timeline.records[i].elapsed_seconds;
    d.push_back(i == 0 ? now : now - timeline.records[i - 1].elapsed_seconds);
  }
  return d;
}

IndicatorVector indicators_over(std::span<const PointRecord> points, std::span<const double> durations,
                                Player player, const IndicatorOptions& options,
                                std::vector<std::string>* warnings) {
  if (points.empty()) throw ArgumentError("indicators over an empty segment");
  if (durations.size() != points.size()) throw ArgumentError("durations/points length mismatch");

  IndicatorVector out;
  const double m = static_cast<double>(points.size());

  std::vector<double> win_times;
  std::vector<double> scores;
  std::vector<double> shares;
  int won_so_far = 0;
  double first_serve_won = 0;
  double second_serve_won = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& r = points[i];
    const bool won = r.won_by(player);
    if (won) {
      win_times.push_back(durations[i]);
      ++won_so_far;
      if (r.server && r.serve_no && static_cast<int>(*r.server) == index_of(player)) {
        if (*r.serve_no == 1) first_serve_won += 1;
        if (*r.serve_no == 2) second_serve_won += 1;
      }
    }
    scores.push_back(r.score(player));
    shares.push_back(static_cast<double>(won_so_far) / static_cast<double>(i + 1));
  }

  out.x(1) = static_cast<double>(win_times.size());
  if (win_times.empty()) {
    warn(warnings, "x2: no points won, mean winning time set to 0");
  } else {
    out.x(2) = mean(win_times);
  }
  if (options.x3_as_variance) {
    out.x(3) = population_variance(win_times, out.x(2));
  } else if (win_times.size() > 1) {
    double s = 0;
    for (std::size_t i = 1; i < win_times.size(); ++i) s += win_times[i] - win_times[i - 1];
    out.x(3) = s / static_cast<double>(win_times.size());
  }

  out.x(4) = mean(scores);
  out.x(5) = std::accumulate(scores.begin(), scores.end(), 0.0);
  out.x(6) = static_cast<double>(std::count_if(scores.begin(), scores.end(),
                                               [](double s) { return s >= 40; })) / m;
  out.x(7) = mean(shares);
  out.x(8) = population_variance(shares, out.x(7));

  out.x(9) = first_serve_won;
  out.x(10) = second_serve_won;
  if (first_serve_won + second_serve_won > 0) {
    out.x(11) = first_serve_won / (first_serve_won + second_serve_won);
    out.x(12) = second_serve_won / (first_serve_won + second_serve_won);
  } else {
    warn(warnings, "x11/x12: no serve points won, rates set to 0");
  }

  auto flag_values = [&](Flag f) {
    std::vector<double> v;
    for (const auto& r : points)
      if (auto x = r.flag(f, player)) v.push_back(*x);
    return v;
  };
  auto flag_rate = [&](int k, Flag f, const char* what) {
    const auto v = flag_values(f);
    if (v.empty()) warn(warnings, "x" + std::to_string(k) + ": no " + what + " data, set to 0");
    out.x(k) = mean(v);
  };

  const auto aces = flag_values(Flag::ace);
  out.x(13) = std::accumulate(aces.begin(), aces.end(), 0.0);
  out.x(14) = out.x(1) / m;
  flag_rate(15, Flag::winner, "winner");
  flag_rate(16, Flag::double_fault, "double-fault");
  flag_rate(17, Flag::unforced_error, "unforced-error");
  flag_rate(18, Flag::net_approach, "net-approach");
  flag_rate(19, Flag::net_point_won, "net-point-won");
  flag_rate(20, Flag::break_point_missed, "break-point-missed");

  std::vector<double> distance;
  for (const auto& r : points)
    if (auto d = r.distance_run(player)) distance.push_back(*d);
  if (distance.empty()) warn(warnings, "x21/x22: no running-distance data, set to 0");
  out.x(21) = mean(distance);
  out.x(22) = population_variance(distance, out.x(21));
  return out;
}

std::vector<IndicatorVector> compute_indicators(const ingest::MatchTimeline& timeline, Player player,
                                                Segmentation segmentation,
                                                const IndicatorOptions& options,
                                                std::vector<std::string>* warnings) {
  if (timeline.records.empty()) throw ArgumentError("compute_indicators: empty timeline");
  const auto durations = point_durations(timeline);
  const auto& recs = timeline.records;

  auto same_segment = [&](const PointRecord& a, const PointRecord& b) {
    if (a.set_no != b.set_no) return false;
    return segmentation == Segmentation::per_set || a.game_no == b.game_no;
  };

  std::vector<IndicatorVector> out;
  std::size_t begin = 0;
  while (begin < recs.size()) {
    std::size_t end = begin + 1;
    while (end < recs.size() && same_segment(recs[begin], recs[end])) ++end;
    std::vector<std::string> local;
    auto v = indicators_over(std::span(recs).subspan(begin, end - begin),
                             std::span(durations).subspan(begin, end - begin), player, options,
                             warnings ? &local : nullptr);
    v.segment = static_cast<int>(out.size());
    v.set_no = recs[begin].set_no;
    v.game_no = segmentation == Segmentation::per_game ? recs[begin].game_no : 0;
    for (auto& w : local)
      warnings->push_back(timeline.match_id + " segment " + std::to_string(v.segment) + ": " + w);
    out.push_back(v);
    begin = end;
  }
  return out;
}

std::vector<double> positivize(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("positivize: empty input");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*hi == *lo) throw ArgumentError("positivize: degenerate range (max == min)");
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back((*hi - v) / (*hi - *lo));
  return out;
}

std::vector<MinMaxRange> fit_ranges(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() < 1) throw ArgumentError("min-max scaling needs at least one row");
  std::vector<MinMaxRange> ranges;
  for (Eigen::Index j = 0; j < matrix.cols(); ++j)
    ranges.push_back({matrix.col(j).minCoeff(), matrix.col(j).maxCoeff()});
  return ranges;
}

Eigen::MatrixXd apply_ranges(const Eigen::MatrixXd& matrix, std::span<const MinMaxRange> ranges) {
  if (static_cast<std::size_t>(matrix.cols()) != ranges.size())
    throw ArgumentError("min-max scaling: column count mismatch");
  Eigen::MatrixXd out(matrix.rows(), matrix.cols());
  for (Eigen::Index j = 0; j < matrix.cols(); ++j)
    for (Eigen::Index i = 0; i < matrix.rows(); ++i)
      out(i, j) = ranges[static_cast<std::size_t>(j)].apply(matrix(i, j));
  return out;
}

Eigen::MatrixXd normalize_minmax(const Eigen::MatrixXd& matrix) {
  const auto ranges = fit_ranges(matrix);
  return apply_ranges(matrix, ranges);
}

}  // namespace tennis::indicators
