#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tennis {

enum class Player { one = 1, two = 2 };

/// Throws ArgumentError unless `p` is 1 or 2.
Player to_player(int p);
constexpr Player opponent(Player p) { return p == Player::one ? Player::two : Player::one; }
constexpr int index_of(Player p) { return static_cast<int>(p); }

}  // namespace tennis

namespace tennis::ingest {

/// Per-player 0/1 event columns.
enum class Flag { ace, winner, double_fault, unforced_error, net_approach, net_point_won, break_point_missed };

/// One scored point. Score columns hold the game score when the point starts (AD = 55, tie-break
/// games carry point counts); points/sets/games columns follow the source file.
struct PointRecord {
  std::string match_id;
  std::string player1;
  std::string player2;
  int elapsed_seconds = 0;
  int set_no = 1;
  int game_no = 1;
  int point_no = 1;
  int p1_sets = 0;
  int p2_sets = 0;
  int p1_games = 0;
  int p2_games = 0;
  int p1_score = 0;
  int p2_score = 0;
  int point_victor = 1;
  int p1_points_won = 0;
  int p2_points_won = 0;

  std::optional<double> server;
  std::optional<double> serve_no;
  std::optional<double> p1_ace, p2_ace;
  std::optional<double> p1_winner, p2_winner;
  std::optional<double> p1_double_fault, p2_double_fault;
  std::optional<double> p1_unf_err, p2_unf_err;
  std::optional<double> p1_net_pt, p2_net_pt;
  std::optional<double> p1_net_pt_won, p2_net_pt_won;
  std::optional<double> p1_break_pt_missed, p2_break_pt_missed;
  std::optional<double> p1_distance_run, p2_distance_run;
  std::optional<double> rally_count;
  std::optional<double> speed_mph;
  std::optional<std::string> serve_width;
  std::optional<std::string> serve_depth;
  std::optional<std::string> return_depth;

  /// Cells of columns the library does not model, in Schema::passthrough order.
  std::vector<std::string> passthrough;

  bool won_by(Player p) const { return point_victor == index_of(p); }
  int score(Player p) const { return p == Player::one ? p1_score : p2_score; }
  int sets(Player p) const { return p == Player::one ? p1_sets : p2_sets; }
  int games(Player p) const { return p == Player::one ? p1_games : p2_games; }
  int points_won(Player p) const { return p == Player::one ? p1_points_won : p2_points_won; }
  std::optional<double> distance_run(Player p) const {
    return p == Player::one ? p1_distance_run : p2_distance_run;
  }
  std::optional<double> flag(Flag f, Player p) const;
  bool is_tiebreak() const { return p1_games == 6 && p2_games == 6; }

  bool operator==(const PointRecord&) const = default;
};

struct MatchTimeline {
  std::string match_id;
  std::vector<PointRecord> records;

  const std::string& player_name(Player p) const;
};

enum class ColumnKind { text, integer, clock, score, number, category };

/// A modelled column: canonical (snake_case) name, accepted alias, and the member it fills.
struct Column {
  std::string_view name;
  std::string_view alias;
  ColumnKind kind;
  std::string PointRecord::*text = nullptr;
  int PointRecord::*integer = nullptr;
  std::optional<double> PointRecord::*number = nullptr;
  std::optional<std::string> PointRecord::*category = nullptr;

  bool required() const {
    return kind == ColumnKind::text || kind == ColumnKind::integer || kind == ColumnKind::clock ||
           kind == ColumnKind::score;
  }
  bool optional_field() const { return !required(); }
};

std::span<const Column> columns();
const Column* find_column(std::string_view name_or_alias);

/// Column layout of a file: header as read, and which modelled column each position maps to.
struct Schema {
  std::vector<std::string> header;
  std::vector<const Column*> mapped;  // nullptr for passthrough positions
  std::vector<std::string> passthrough_names;

  bool has(std::string_view canonical_name) const;
  /// Optional modelled columns present in this schema, in header order.
  std::vector<const Column*> optional_columns() const;

  /// Every modelled column under its canonical name.
  static Schema canonical();
};

struct Dataset {
  Schema schema;
  std::vector<PointRecord> records;  // file order
};

/// "0","15","30","40" map to themselves, "AD" to 55. Anything else is a ParseError.
int parse_score_token(std::string_view token);
/// Row-aware variant: inside tie-break games plain non-negative point counts are also accepted.
int parse_score_token(std::string_view token, bool tiebreak, std::size_t line_no);

/// "h:mm:ss" to seconds.
int parse_clock(std::string_view text);
std::string format_clock(int seconds);

Dataset parse_dataset(std::istream& in, const std::string& source = "<stream>");
Dataset read_dataset(const std::filesystem::path& path);
std::string write_dataset(const Dataset& data);

/// One timeline per match id (first-appearance order), records sorted by (set, game, point).
std::vector<MatchTimeline> group_matches(std::vector<PointRecord> records);
std::vector<MatchTimeline> load_matches(const std::filesystem::path& path);

struct MissingReport {
  std::vector<std::pair<std::string, double>> rates;  // optional columns, header order

  std::optional<double> rate(std::string_view column) const;
};

MissingReport missing_rate(std::span<const PointRecord> records,
                           const Schema& schema = Schema::canonical());

/// Nearest-complete-row imputation. Distance is Euclidean over raw numeric fields present in both
/// rows; ties go to the earliest complete row. Categorical gaps copy the donor's code.
std::vector<PointRecord> impute_missing(std::span<const PointRecord> records,
                                        const Schema& schema = Schema::canonical());

struct BoxplotStats {
  std::string column;
  std::size_t count = 0;
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  double lower_fence = 0, upper_fence = 0;
  std::size_t outlier_count = 0;
};

struct BoxplotReport {
  std::vector<BoxplotStats> columns;
  std::vector<std::string> warnings;
};

/// Quantile by linear interpolation between order statistics, h = (n-1)p. `sorted` must be sorted.
double quantile_linear(std::span<const double> sorted, double p);
BoxplotStats boxplot(std::string column, std::vector<double> values);

/// Continuous columns only (speed, distance run, rally count). Outliers are counted, never removed.
BoxplotReport outlier_report(std::span<const PointRecord> records,
                             const Schema& schema = Schema::canonical());

}  // namespace tennis::ingest
