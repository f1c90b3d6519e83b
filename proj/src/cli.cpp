#include "tennis/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "tennis/csv.hpp"
#include "tennis/error.hpp"
#include "tennis/fuzzy.hpp"
#include "tennis/ingest.hpp"
#include "tennis/pca.hpp"

namespace tennis::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

const std::map<std::string, indicators::Segmentation> kSegmentations = {
    {"set", indicators::Segmentation::per_set}, {"game", indicators::Segmentation::per_game}};
const std::map<std::string, momentum::VarianceKind> kVariances = {
    {"sample", momentum::VarianceKind::sample}, {"population", momentum::VarianceKind::population}};
const std::map<std::string, Format> kFormats = {{"csv", Format::csv}, {"json", Format::json}};

template <class T>
std::string name_of(const std::map<std::string, T>& table, T value) {
  for (const auto& [k, v] : table)
    if (v == value) return k;
  return {};
}

std::string num(double v) { return csv::format_number(v); }

// A small result table rendered either as CSV or as a JSON array of objects.
using Cell = std::variant<std::monostate, std::string, double, long long>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

std::string render_csv(const Table& t) {
  std::string s = csv::join(t.columns) + "\n";
  csv::Row row;
  for (const auto& r : t.rows) {
    row.clear();
    for (const auto& c : r) {
      if (const auto* str = std::get_if<std::string>(&c))
        row.push_back(*str);
      else if (const auto* d = std::get_if<double>(&c))
        row.push_back(std::isfinite(*d) ? num(*d) : std::string());
      else if (const auto* i = std::get_if<long long>(&c))
        row.push_back(std::to_string(*i));
      else
        row.emplace_back();
    }
    s += csv::join(row) + "\n";
  }
  return s;
}

json to_json(const Cell& c) {
  if (const auto* str = std::get_if<std::string>(&c)) return *str;
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? json(*d) : json(nullptr);
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  return nullptr;
}

json table_json(const Table& t) {
  json arr = json::array();
  for (const auto& r : t.rows) {
    json o = json::object();
    for (std::size_t j = 0; j < t.columns.size(); ++j) o[t.columns[j]] = to_json(r[j]);
    arr.push_back(std::move(o));
  }
  return arr;
}

class Session {
public:
  Session(RunConfig cfg, std::ostream& out, std::ostream& err)
      : cfg_(std::move(cfg)), hash_(cfg_.hash()), out_(out), err_(err) {}

  int dispatch();

private:
  void clean();
  void indicators();
  void evaluate();
  void correlate();
  void turning_points();
  void predict();
  void expand();
  void report();

  ingest::Dataset load_dataset();
  const ingest::MatchTimeline& select_match();
  Player select_player(const ingest::MatchTimeline& m) const;
  std::vector<momentum::MomentumSample> samples_for(const ingest::MatchTimeline& m, Player p) const;
  grnn::SweepResult sweep(const ingest::MatchTimeline& m, Player p,
                          std::vector<grnn::RankedFeature>* ranking) const;
  json config_json() const;

  fs::path path_for(const std::string& dir, const std::string& stem, const std::string& ext) const {
    return cfg_.out / dir / (stem + "-" + hash_ + "." + ext);
  }
  void emit(const fs::path& path, std::string_view content) {
    fs::create_directories(path.parent_path());
    csv::write_file_atomic(path, content);
    out_ << path.string() << '\n';
  }
  void emit_table(const std::string& dir, const std::string& stem, const Table& t) {
    if (cfg_.format == Format::json)
      emit(path_for(dir, stem, "json"), table_json(t).dump(2) + "\n");
    else
      emit(path_for(dir, stem, "csv"), render_csv(t));
  }
  void warn(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) err_ << "warning: " << w << '\n';
  }

  RunConfig cfg_;
  std::string hash_;
  std::ostream& out_;
  std::ostream& err_;
  std::vector<ingest::MatchTimeline> matches_;
};

int Session::dispatch() {
  if (cfg_.data.empty()) throw ArgumentError("no dataset given (--data)");
  if (!fs::is_regular_file(cfg_.data)) throw ArgumentError("dataset not found: " + cfg_.data.string());
  const std::string& c = cfg_.command;
  if (c == "clean") clean();
  else if (c == "indicators") indicators();
  else if (c == "evaluate") evaluate();
  else if (c == "correlate") correlate();
  else if (c == "turning-points") turning_points();
  else if (c == "predict") predict();
  else if (c == "expand") expand();
  else if (c == "report") report();
  else throw ArgumentError("unknown command: " + c);
  return kExitOk;
}

ingest::Dataset Session::load_dataset() { return ingest::read_dataset(cfg_.data); }

const ingest::MatchTimeline& Session::select_match() {
  if (matches_.empty()) {
    auto ds = load_dataset();
    const auto missing = ingest::missing_rate(ds.records, ds.schema);
    const bool gaps = std::any_of(missing.rates.begin(), missing.rates.end(),
                                  [](const auto& r) { return r.second > 0; });
    if (gaps) {
      err_ << "note: dataset has missing values; imputing in memory (run 'clean' to persist)\n";
      ds.records = ingest::impute_missing(ds.records, ds.schema);
    }
    matches_ = ingest::group_matches(std::move(ds.records));
  }
  if (matches_.empty()) throw DataError("dataset has no points");

  std::vector<const ingest::MatchTimeline*> hits;
  for (const auto& m : matches_)
    if (cfg_.match.empty() || m.match_id == cfg_.match) hits.push_back(&m);
  if (hits.empty())
    for (const auto& m : matches_) {
      const auto& id = m.match_id;
      const auto& want = cfg_.match;
      if (id.size() > want.size() && id.ends_with(want) && id[id.size() - want.size() - 1] == '-')
        hits.push_back(&m);
    }
  if (hits.size() == 1) return *hits.front();

  std::string ids;
  for (const auto& m : matches_) ids += (ids.empty() ? "" : ", ") + m.match_id;
  if (cfg_.match.empty()) throw ArgumentError("dataset has several matches; choose one with --match: " + ids);
  throw ArgumentError("match '" + cfg_.match + "' " + (hits.empty() ? "not found" : "is ambiguous") +
                      "; available: " + ids);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return s;
}

Player Session::select_player(const ingest::MatchTimeline& m) const {
  if (cfg_.player == "1") return Player::one;
  if (cfg_.player == "2") return Player::two;
  const auto needle = lower(cfg_.player);
  const bool in1 = lower(m.player_name(Player::one)).find(needle) != std::string::npos;
  const bool in2 = lower(m.player_name(Player::two)).find(needle) != std::string::npos;
  if (in1 != in2) return in1 ? Player::one : Player::two;
  throw ArgumentError("player '" + cfg_.player + "' " + (in1 ? "matches both" : "matches neither") +
                      " of '" + m.player_name(Player::one) + "' and '" + m.player_name(Player::two) + "'");
}

std::vector<momentum::MomentumSample> Session::samples_for(const ingest::MatchTimeline& m, Player p) const {
  return momentum::training_samples(momentum::extract_momentum_samples(m, p));
}

json Session::config_json() const {
  json o = json::object();
  std::istringstream lines(cfg_.canonical());
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find('=');
    o[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return o;
}

void Session::clean() {
  auto ds = load_dataset();
  const auto before = ingest::missing_rate(ds.records, ds.schema);
  const auto box = ingest::outlier_report(ds.records, ds.schema);
  warn(box.warnings);
  ds.records = ingest::impute_missing(ds.records, ds.schema);
  const auto after = ingest::missing_rate(ds.records, ds.schema);

  emit(path_for("dataset", "cleaned", "csv"), ingest::write_dataset(ds));

  Table missing{{"column", "missing_rate", "missing_rate_after"}, {}};
  for (std::size_t i = 0; i < before.rates.size(); ++i)
    missing.add({before.rates[i].first, before.rates[i].second, after.rates[i].second});
  emit_table("dataset", "missing", missing);

  Table boxes{{"column", "count", "min", "q1", "median", "q3", "max", "lower_fence", "upper_fence", "outliers"},
              {}};
  for (const auto& b : box.columns)
    boxes.add({b.column, static_cast<long long>(b.count), b.min, b.q1, b.median, b.q3, b.max, b.lower_fence,
               b.upper_fence, static_cast<long long>(b.outlier_count)});
  emit_table("dataset", "boxplot", boxes);
}

void Session::indicators() {
  const auto& m = select_match();
  indicators::IndicatorOptions opts{cfg_.x3_as_variance};
  std::vector<std::string> warnings;

  std::vector<std::pair<Player, indicators::IndicatorVector>> all;
  for (Player p : {Player::one, Player::two})
    for (const auto& v : indicators::compute_indicators(m, p, cfg_.segmentation, opts, &warnings))
      all.emplace_back(p, v);
  warn(warnings);

  const auto n = static_cast<int>(all.size());
  const int k = std::min({cfg_.pca_components, n - 1, indicators::kIndicatorCount});
  if (k < cfg_.pca_components)
    err_ << "note: " << n << " segments allow at most " << std::max(k, 0) << " principal components\n";
  indicators::PcaResult pca;
  if (k > 0) {
    Eigen::MatrixXd X(n, indicators::kIndicatorCount);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < indicators::kIndicatorCount; ++j)
        X(i, j) = all[static_cast<std::size_t>(i)].second.values[static_cast<std::size_t>(j)];
    std::vector<std::string> pca_warnings;
    pca = indicators::pca_reduce(X, k, &pca_warnings);
    warn(pca_warnings);
  }

  Table t{{"player", "name", "segment", "set", "game"}, {}};
  for (int j = 1; j <= indicators::kIndicatorCount; ++j) t.columns.push_back("x" + std::to_string(j));
  for (int c = 1; c <= std::max(k, 0); ++c) t.columns.push_back("pc" + std::to_string(c));
  for (int i = 0; i < n; ++i) {
    const auto& [p, v] = all[static_cast<std::size_t>(i)];
    std::vector<Cell> row{static_cast<long long>(index_of(p)), m.player_name(p), static_cast<long long>(v.segment),
                          static_cast<long long>(v.set_no), static_cast<long long>(v.game_no)};
    for (double x : v.values) row.emplace_back(x);
    for (int c = 0; c < std::max(k, 0); ++c) row.emplace_back(pca.scores(i, c));
    t.add(std::move(row));
  }
  emit_table(m.match_id, "indicators", t);

  if (k > 0) {
    Table l{{"component", "explained_variance"}, {}};
    for (int j = 1; j <= indicators::kIndicatorCount; ++j) l.columns.push_back("x" + std::to_string(j));
    for (Eigen::Index c = 0; c < pca.loadings.rows(); ++c) {
      std::vector<Cell> row{static_cast<long long>(c + 1), pca.explained_variance(c)};
      for (Eigen::Index j = 0; j < pca.loadings.cols(); ++j) row.emplace_back(pca.loadings(c, j));
      l.add(std::move(row));
    }
    emit_table(m.match_id, "pca", l);
  }
}

void Session::evaluate() {
  const auto& m = select_match();
  fuzzy::MomentumOptions opts;
  opts.window = cfg_.window;
  opts.indicator_options.x3_as_variance = cfg_.x3_as_variance;
  const auto mm = fuzzy::match_momentum(m, opts);
  warn(mm.warnings);
  if (mm.membership_fallbacks)
    err_ << "note: " << mm.membership_fallbacks << " membership values used the nearest grade branch\n";

  Table t{{"point", "elapsed", "player", "name", "momentum"}, {}};
  for (const auto* series : {&mm.player1, &mm.player2})
    for (const auto& pt : *series)
      t.add({static_cast<long long>(pt.index + 1), ingest::format_clock(pt.elapsed_seconds),
             static_cast<long long>(index_of(pt.player)), m.player_name(pt.player), pt.score});
  emit_table(m.match_id, "evaluate", t);
}

void Session::correlate() {
  const auto& m = select_match();
  const auto samples = samples_for(m, select_player(m));
  std::vector<std::string> warnings;
  const auto cm = momentum::correlation_matrix(samples, &warnings);
  warn(warnings);
  Table t{{"feature"}, {}};
  t.columns.insert(t.columns.end(), cm.labels.begin(), cm.labels.end());
  for (std::size_t i = 0; i < cm.labels.size(); ++i) {
    std::vector<Cell> row{cm.labels[i]};
    for (std::size_t j = 0; j < cm.labels.size(); ++j)
      row.emplace_back(cm.r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    t.add(std::move(row));
  }
  emit_table(m.match_id, "correlate", t);
}

void Session::turning_points() {
  const auto& m = select_match();
  const auto samples = samples_for(m, select_player(m));
  std::vector<std::string> warnings;
  const auto tps = momentum::detect_turning_points(samples, cfg_.turning, &warnings);
  warn(warnings);

  Table t{{"point", "elapsed", "direction", "window", "truncated"}, {}};
  for (const auto& tp : tps)
    t.add({static_cast<long long>(tp.index), ingest::format_clock(samples[tp.index - 1].elapsed_seconds),
           std::string(momentum::to_string(tp.direction)), static_cast<long long>(tp.window.size()),
           static_cast<long long>(tp.truncated)});
  emit_table(m.match_id, "turning-points", t);

  Table w{{"turning_point", "direction", "point", "S1", "S2", "S3", "S4", "omega"}, {}};
  for (const auto& tp : tps)
    for (const auto& smp : tp.window)
      w.add({static_cast<long long>(tp.index), std::string(momentum::to_string(tp.direction)),
             static_cast<long long>(smp.index), smp.s1, smp.s2, smp.s3, smp.s4, static_cast<long long>(smp.omega)});
  emit_table(m.match_id, "turning-windows", w);

  const auto groups = momentum::group_windows(tps);
  if (groups.empty()) err_ << "note: no turning points found\n";
  const auto stats = momentum::turning_point_stats(groups, cfg_.variance);
  Table s{{"group", "samples", "feature", "mean", "mode", "variance", "trimmed_mean"}, {}};
  for (const auto& g : stats.groups)
    for (std::size_t k = 0; k < 4; ++k) {
      const auto& d = g.features[k];
      s.add({g.name, static_cast<long long>(g.count), std::string(momentum::kSampleLabels[k]), d.mean, d.mode,
             d.variance, d.trimmed_mean});
    }
  emit_table(m.match_id, "turning-stats", s);
}

void Session::predict() {
  const auto& m = select_match();
  const Player p = select_player(m);
  const auto samples = samples_for(m, p);
  const auto fit = grnn::fit_and_evaluate(grnn::base_features(samples), grnn::labels(samples), cfg_.cv);

  json r = json::object();
  r["match"] = m.match_id;
  r["player"] = m.player_name(p);
  r["seed"] = cfg_.cv.seed;
  r["samples"] = samples.size();
  r["train_size"] = fit.train_size;
  r["test_size"] = fit.test.total;
  r["sigma"] = fit.cv.model.sigma;
  r["mse"] = fit.test.mse;
  r["acc"] = fit.test.acc;
  r["correct"] = fit.test.correct;
  json cv = json::array();
  for (std::size_t i = 0; i < cfg_.cv.sigma_grid.size(); ++i)
    cv.push_back({{"sigma", cfg_.cv.sigma_grid[i]}, {"cv_mse", fit.cv.cv_mse[i]}});
  r["cv"] = std::move(cv);
  r["config"] = config_json();
  emit(path_for(m.match_id, "predict", "json"), r.dump(2) + "\n");

  Table t{{"point", "actual", "predicted", "raw", "error"}, {}};
  for (std::size_t i = 0; i < fit.test.predictions.size(); ++i) {
    const auto& pr = fit.test.predictions[i];
    t.add({static_cast<long long>(samples[fit.train_size + i].index), pr.actual, pr.predicted, pr.raw,
           pr.actual - pr.raw});
  }
  emit(path_for(m.match_id, "predict-points", "csv"), render_csv(t));
}

grnn::SweepResult Session::sweep(const ingest::MatchTimeline& m, Player p,
                                 std::vector<grnn::RankedFeature>* ranking) const {
  return grnn::expansion_sweep(m, p, cfg_.cv, ranking);
}

void Session::expand() {
  const auto& m = select_match();
  std::vector<grnn::RankedFeature> ranking;
  const auto res = sweep(m, select_player(m), &ranking);
  Table t{{"step", "added", "r", "features", "sigma", "mse", "acc", "best_mse", "best_acc"}, {}};
  for (std::size_t s = 0; s < res.steps.size(); ++s) {
    const auto& st = res.steps[s];
    Cell r;
    if (s > 0 && ranking[s - 1].r) r = *ranking[s - 1].r;
    t.add({static_cast<long long>(s), st.added, r, static_cast<long long>(st.feature_count), st.sigma, st.mse,
           st.acc, static_cast<long long>(s == res.best_mse_step),
           static_cast<long long>(s == res.best_acc_step)});
  }
  emit_table(m.match_id, "expand", t);
}

void Session::report() {
  const auto& m = select_match();
  const Player p = select_player(m);
  const auto samples = samples_for(m, p);

  fuzzy::MomentumOptions opts;
  opts.window = cfg_.window;
  opts.indicator_options.x3_as_variance = cfg_.x3_as_variance;
  const auto mm = fuzzy::match_momentum(m, opts);
  auto mean_of = [](const std::vector<fuzzy::MomentumPoint>& v, std::size_t n) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += v[i].score;
    return s / static_cast<double>(n);
  };
  const std::size_t n = mm.player1.size();
  const std::size_t half = std::max<std::size_t>(1, n / 2);

  const auto cm = momentum::correlation_matrix(samples);
  const auto fit = grnn::fit_and_evaluate(grnn::base_features(samples), grnn::labels(samples), cfg_.cv);
  const auto sw = sweep(m, p, nullptr);
  const auto& best = sw.steps[sw.best_expanded_acc_step];

  std::vector<std::pair<std::string, Cell>> kv = {
      {"match", m.match_id},
      {"player", m.player_name(p)},
      {"opponent", m.player_name(opponent(p))},
      {"points", static_cast<long long>(m.records.size())},
      {"momentum_mean_player1", mean_of(mm.player1, n)},
      {"momentum_mean_player2", mean_of(mm.player2, n)},
      {"momentum_first_half_player1", mean_of(mm.player1, half)},
      {"momentum_first_half_player2", mean_of(mm.player2, half)},
  };
  for (std::size_t k = 0; k < 4; ++k)
    kv.emplace_back("r_omega_" + std::string(momentum::kSampleLabels[k]), cm.r(4, static_cast<Eigen::Index>(k)));
  kv.insert(kv.end(), {
                          {"baseline_sigma", fit.cv.model.sigma},
                          {"baseline_mse", fit.test.mse},
                          {"baseline_acc", fit.test.acc},
                          {"expanded_step", static_cast<long long>(sw.best_expanded_acc_step)},
                          {"expanded_mse", best.mse},
                          {"expanded_acc", best.acc},
                          {"best_mse_step", static_cast<long long>(sw.best_mse_step)},
                          {"best_mse", sw.steps[sw.best_mse_step].mse},
                          {"seed", static_cast<long long>(cfg_.cv.seed)},
                      });

  if (cfg_.format == Format::json) {
    json r = json::object();
    for (const auto& [k, v] : kv) r[k] = to_json(v);
    r["config"] = config_json();
    emit(path_for(m.match_id, "report", "json"), r.dump(2) + "\n");
  } else {
    Table t{{"key", "value"}, {}};
    for (const auto& [k, v] : kv) t.add({k, v});
    emit(path_for(m.match_id, "report", "csv"), render_csv(t));
  }
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string RunConfig::canonical() const {
  std::map<std::string, std::string> kv = {
      {"command", command},
      {"data", data.string()},
      {"match", match},
      {"player", player},
      {"segmentation", name_of(kSegmentations, segmentation)},
      {"x3-variance", x3_as_variance ? "true" : "false"},
      {"pca", std::to_string(pca_components)},
      {"window", std::to_string(window)},
      {"lookback", std::to_string(turning.lookback)},
      {"run-min", std::to_string(turning.run_min)},
      {"variance", name_of(kVariances, variance)},
      {"folds", std::to_string(cv.folds)},
      {"sigma-min", num(sigma_min)},
      {"sigma-max", num(sigma_max)},
      {"sigma-count", std::to_string(sigma_count)},
      {"split", num(cv.split_fraction)},
      {"threshold", num(cv.decision_threshold)},
      {"seed", std::to_string(cv.seed)},
      {"format", name_of(kFormats, format)},
  };
  std::string s;
  for (const auto& [k, v] : kv) s += k + "=" + v + "\n";
  return s;
}

std::string RunConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical())));
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string segmentation = "set", variance = "sample", format = "csv", data;
  std::string out_dir = cfg.out.string();

  CLI::App app{"Point-by-point tennis momentum analysis", "tennis-momentum"};
  app.set_config("--config", "", "key=value settings file; command-line flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1, 1);
  app.fallthrough();

  app.add_option("--data", data, "Point-by-point CSV file");
  app.add_option("--match", cfg.match, "Match id, or its numeric suffix (e.g. 1304)");
  app.add_option("--player", cfg.player, "1, 2 or part of a player name")->capture_default_str();
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--format", format, "Table format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--seed", cfg.cv.seed, "Seed recorded with every run")->capture_default_str();
  app.add_option("--segmentation", segmentation, "Indicator segments")
      ->check(CLI::IsMember({"set", "game"}))
      ->capture_default_str();
  app.add_flag("--x3-variance", cfg.x3_as_variance, "Use the variance of winning-time differences for x3");
  app.add_option("--pca", cfg.pca_components, "Principal components of the indicator matrix (0: none)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--window", cfg.window, "Points per momentum window")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--lookback", cfg.turning.lookback, "Samples before a turning point")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--run-min", cfg.turning.run_min, "Minimum run length around a turning point")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--variance", variance, "Variance in turning-point statistics")
      ->check(CLI::IsMember({"sample", "population"}))
      ->capture_default_str();
  app.add_option("--folds", cfg.cv.folds, "Cross-validation folds")->check(CLI::Range(2, 1000))->capture_default_str();
  app.add_option("--sigma-min", cfg.sigma_min, "Smallest smoothing factor")->capture_default_str();
  app.add_option("--sigma-max", cfg.sigma_max, "Largest smoothing factor")->capture_default_str();
  app.add_option("--sigma-count", cfg.sigma_count, "Log-spaced smoothing factors")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--split", cfg.cv.split_fraction, "Training fraction (chronological)")->capture_default_str();
  app.add_option("--threshold", cfg.cv.decision_threshold, "Decision threshold on the raw output")
      ->capture_default_str();
  app.add_option("--threads", cfg.cv.threads, "Worker threads for the smoothing-factor search")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"clean", "Report missing values and outliers, write the imputed dataset"},
      {"indicators", "Per-segment indicators x1..x22 for both players (optional PCA)"},
      {"evaluate", "Fuzzy momentum score of both players at every point"},
      {"correlate", "Correlation matrix of S1..S4 and the next-point label"},
      {"turning-points", "Momentum turning points and the statistics of their windows"},
      {"predict", "Cross-validated GRNN next-point prediction from S1..S4"},
      {"expand", "Feature-expansion sweep over extra indicators"},
      {"report", "Summary of momentum, correlation and prediction for one match"},
  };
  for (const auto& [name, desc] : commands) app.add_subcommand(name, desc);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.data = data;
    cfg.out = out_dir;
    cfg.segmentation = kSegmentations.at(segmentation);
    cfg.variance = kVariances.at(variance);
    cfg.format = kFormats.at(format);
    cfg.cv.sigma_grid = grnn::log_spaced(cfg.sigma_min, cfg.sigma_max, cfg.sigma_count);
    cfg.cv.validate();
    return Session(std::move(cfg), out, err).dispatch();
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace tennis::cli
