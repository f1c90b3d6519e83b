#include "tennis/momentum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tennis/error.hpp"
#include "tennis/indicators.hpp"

namespace tennis::momentum {

using ingest::Flag;

double MomentumSample::feature(std::size_t k) const {
  switch (k) {
    case 0: return s1;
    case 1: return s2;
    case 2: return s3;
    case 3: return s4;
    case 4: return omega;
  }
  throw ArgumentError("sample feature index out of range");
}

std::vector<MomentumSample> extract_momentum_samples(const ingest::MatchTimeline& timeline, Player player) {
  const auto& recs = timeline.records;
  if (recs.empty()) throw ArgumentError("extract_momentum_samples: empty timeline");
  const Player other = opponent(player);

  std::vector<MomentumSample> out;
  out.reserve(recs.size());
  double streak = 0;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto& r = recs[i];
    streak = r.won_by(player) ? streak + 1 : 0;
    MomentumSample s;
    s.index = i + 1;
    s.elapsed_seconds = r.elapsed_seconds;
    s.s1 = r.sets(player);
    s.s2 = r.score(player) - r.score(other);
    s.s3 = streak;
    s.s4 = r.points_won(player) - r.points_won(other);
    if (i + 1 < recs.size()) {
      s.omega = recs[i + 1].won_by(player) ? 1 : 0;
    } else {
      s.omega = r.won_by(player) ? 1 : 0;
      s.final_point = true;
    }
    out.push_back(s);
  }
  return out;
}

std::vector<MomentumSample> training_samples(std::span<const MomentumSample> samples) {
  std::vector<MomentumSample> out;
  for (const auto& s : samples)
    if (!s.final_point) out.push_back(s);
  return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ArgumentError("pearson: length mismatch");
  if (x.size() < 2) throw ArgumentError("pearson: need at least 2 observations");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) throw ArgumentError("pearson: undefined correlation (zero variance)");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationMatrix correlation_matrix(std::span<const std::string> labels,
                                     std::span<const std::vector<double>> columns,
                                     std::vector<std::string>* warnings) {
  if (labels.size() != columns.size()) throw ArgumentError("correlation_matrix: label/column mismatch");
  const std::size_t k = columns.size();
  if (k == 0) return {};
  const std::size_t n = columns.front().size();
  if (n < 2) throw ArgumentError("correlation_matrix: need at least 2 samples");
  for (const auto& c : columns)
    if (c.size() != n) throw ArgumentError("correlation_matrix: ragged columns");

  CorrelationMatrix m;
  m.labels.assign(labels.begin(), labels.end());
  const auto K = static_cast<Eigen::Index>(k);
  m.r = Eigen::MatrixXd::Constant(K, K, std::numeric_limits<double>::quiet_NaN());
  m.defined.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    const auto [lo, hi] = std::minmax_element(columns[j].begin(), columns[j].end());
    m.defined[j] = *lo != *hi;
    if (!m.defined[j] && warnings)
      warnings->push_back("correlation: " + m.labels[j] + " is constant, correlations undefined");
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (!m.defined[i]) continue;
    const auto I = static_cast<Eigen::Index>(i);
    m.r(I, I) = 1.0;
    for (std::size_t j = i + 1; j < k; ++j) {
      if (!m.defined[j]) continue;
      const auto J = static_cast<Eigen::Index>(j);
      m.r(I, J) = m.r(J, I) = pearson(columns[i], columns[j]);
    }
  }
  return m;
}

CorrelationMatrix correlation_matrix(std::span<const MomentumSample> samples,
                                     std::vector<std::string>* warnings) {
  std::vector<std::string> labels(kSampleLabels.begin(), kSampleLabels.end());
  std::vector<std::vector<double>> cols(5);
  for (const auto& s : samples)
    for (std::size_t k = 0; k < 5; ++k) cols[k].push_back(s.feature(k));
  return correlation_matrix(labels, cols, warnings);
}

const char* to_string(Turn t) { return t == Turn::loss_to_win ? "loss_to_win" : "win_to_loss"; }

std::vector<TurningPoint> detect_turning_points(std::span<const MomentumSample> samples,
                                                const TurningOptions& options,
                                                std::vector<std::string>* warnings) {
  if (options.lookback == 0) throw ArgumentError("detect_turning_points: lookback must be positive");
  if (options.run_min == 0) throw ArgumentError("detect_turning_points: run_min must be positive");

  struct Run {
    int value;
    std::size_t start, length;
  };
  std::vector<Run> runs;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!runs.empty() && runs.back().value == samples[i].omega)
      ++runs.back().length;
    else
      runs.push_back({samples[i].omega, i, 1});
  }

  std::vector<TurningPoint> out;
  for (std::size_t k = 1; k < runs.size(); ++k) {
    const Run& before = runs[k - 1];
    const Run& after = runs[k];
    if (before.length < options.run_min || after.length < options.run_min) continue;
    TurningPoint tp;
    tp.index = samples[after.start].index;
    tp.direction = before.value == 0 ? Turn::loss_to_win : Turn::win_to_loss;
    const std::size_t first = after.start >= options.lookback ? after.start - options.lookback : 0;
    tp.truncated = after.start < options.lookback;
    if (tp.truncated && warnings)
      warnings->push_back("turning point at sample " + std::to_string(tp.index) + ": only " +
                          std::to_string(after.start) + " of " + std::to_string(options.lookback) +
                          " lookback samples available");
    tp.window.assign(samples.begin() + static_cast<std::ptrdiff_t>(first),
                     samples.begin() + static_cast<std::ptrdiff_t>(after.start + 1));
    out.push_back(std::move(tp));
  }
  return out;
}

DescriptiveStats describe(std::span<const double> data, VarianceKind variance) {
  if (data.empty()) throw ArgumentError("describe: empty data");
  std::vector<double> v(data.begin(), data.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();

  DescriptiveStats s;
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);

  std::size_t best_count = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && v[j] == v[i]) ++j;
    if (j - i > best_count) {
      best_count = j - i;
      s.mode = v[i];
    }
    i = j;
  }

  double ss = 0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  if (variance == VarianceKind::population)
    s.variance = ss / static_cast<double>(n);
  else
    s.variance = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;

  const auto cut = static_cast<std::size_t>(std::floor(0.15 * static_cast<double>(n)));
  s.trimmed_mean = std::accumulate(v.begin() + static_cast<std::ptrdiff_t>(cut),
                                   v.end() - static_cast<std::ptrdiff_t>(cut), 0.0) /
                   static_cast<double>(n - 2 * cut);
  return s;
}

TurningPointStats turning_point_stats(std::span<const SampleGroup> groups, VarianceKind variance) {
  TurningPointStats out;
  for (const auto& g : groups) {
    if (g.samples.empty()) throw ArgumentError("turning_point_stats: group '" + g.name + "' is empty");
    GroupStats gs;
    gs.name = g.name;
    gs.count = g.samples.size();
    for (std::size_t k = 0; k < 4; ++k) {
      std::vector<double> col;
      col.reserve(g.samples.size());
      for (const auto& s : g.samples) col.push_back(s.feature(k));
      gs.features[k] = describe(col, variance);
    }
    out.groups.push_back(std::move(gs));
  }
  return out;
}

std::vector<SampleGroup> group_windows(std::span<const TurningPoint> points) {
  std::vector<SampleGroup> out;
  for (Turn t : {Turn::loss_to_win, Turn::win_to_loss}) {
    SampleGroup g{to_string(t), {}};
    for (const auto& tp : points)
      if (tp.direction == t) g.samples.insert(g.samples.end(), tp.window.begin(), tp.window.end());
    if (!g.samples.empty()) out.push_back(std::move(g));
  }
  return out;
}

std::vector<NamedColumn> extra_features(const ingest::MatchTimeline& timeline, Player player) {
  const auto& recs = timeline.records;
  if (recs.empty()) throw ArgumentError("extra_features: empty timeline");
  const auto durations = indicators::point_durations(timeline);

  std::vector<NamedColumn> cols = {
      {"x2_mean_winning_time", {}}, {"x5_total_score", {}},     {"x9_first_serve_won", {}},
      {"x10_second_serve_won", {}}, {"x11_first_serve_rate", {}}, {"x12_second_serve_rate", {}},
      {"x13_aces", {}},             {"x21_mean_distance", {}},  {"points_won", {}},
      {"winners", {}},              {"double_faults", {}},      {"unforced_errors", {}},
      {"net_approaches", {}},       {"net_points_won", {}},     {"distance_run", {}},
  };
  constexpr int kFromIndicators[] = {2, 5, 9, 10, 11, 12, 13, 21};
  constexpr Flag kCounted[] = {Flag::winner, Flag::double_fault, Flag::unforced_error, Flag::net_approach,
                               Flag::net_point_won};

  std::array<double, 5> counts{};
  double distance = 0;
  for (std::size_t t = 0; t < recs.size(); ++t) {
    const auto v = indicators::indicators_over(std::span(recs).first(t + 1), std::span(durations).first(t + 1),
                                               player);
    std::size_t c = 0;
    for (int k : kFromIndicators) cols[c++].values.push_back(v.x(k));
    cols[c++].values.push_back(recs[t].points_won(player));
    for (std::size_t f = 0; f < counts.size(); ++f) {
      counts[f] += recs[t].flag(kCounted[f], player).value_or(0.0);
      cols[c++].values.push_back(counts[f]);
    }
    distance += recs[t].distance_run(player).value_or(0.0);
    cols[c++].values.push_back(distance);
  }
  return cols;
}

}  // namespace tennis::momentum
