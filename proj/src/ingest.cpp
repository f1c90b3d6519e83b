#include "tennis/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "tennis/csv.hpp"
#include "tennis/error.hpp"

namespace tennis {

Player to_player(int p) {
  if (p == 1) return Player::one;
  if (p == 2) return Player::two;
  throw ArgumentError("player must be 1 or 2, got " + std::to_string(p));
}

}  // namespace tennis

namespace tennis::ingest {

namespace {

using PR = PointRecord;

constexpr Column text(std::string_view name, std::string_view alias, std::string PR::*m) {
  return Column{name, alias, ColumnKind::text, m, nullptr, nullptr, nullptr};
}
constexpr Column integer(std::string_view name, std::string_view alias, int PR::*m,
                         ColumnKind kind = ColumnKind::integer) {
  return Column{name, alias, kind, nullptr, m, nullptr, nullptr};
}
constexpr Column number(std::string_view name, std::string_view alias, std::optional<double> PR::*m) {
  return Column{name, alias, ColumnKind::number, nullptr, nullptr, m, nullptr};
}
constexpr Column category(std::string_view name, std::string_view alias,
                          std::optional<std::string> PR::*m) {
  return Column{name, alias, ColumnKind::category, nullptr, nullptr, nullptr, m};
}

const Column kColumns[] = {
    text("match_id", "match_id", &PR::match_id),
    text("player1", "player1", &PR::player1),
    text("player2", "player2", &PR::player2),
    integer("elapsed_time", "ElapsedTime", &PR::elapsed_seconds, ColumnKind::clock),
    integer("set_no", "SetNo", &PR::set_no),
    integer("game_no", "GameNo", &PR::game_no),
    integer("point_no", "PointNumber", &PR::point_no),
    integer("p1_sets", "p1_sets", &PR::p1_sets),
    integer("p2_sets", "p2_sets", &PR::p2_sets),
    integer("p1_games", "P1GamesWon", &PR::p1_games),
    integer("p2_games", "P2GamesWon", &PR::p2_games),
    integer("p1_score", "P1Score", &PR::p1_score, ColumnKind::score),
    integer("p2_score", "P2Score", &PR::p2_score, ColumnKind::score),
    number("server", "PointServer", &PR::server),
    number("serve_no", "ServeNumber", &PR::serve_no),
    integer("point_victor", "PointWinner", &PR::point_victor),
    integer("p1_points_won", "P1PointsWon", &PR::p1_points_won),
    integer("p2_points_won", "P2PointsWon", &PR::p2_points_won),
    number("p1_ace", "P1Ace", &PR::p1_ace),
    number("p2_ace", "P2Ace", &PR::p2_ace),
    number("p1_winner", "P1Winner", &PR::p1_winner),
    number("p2_winner", "P2Winner", &PR::p2_winner),
    number("p1_double_fault", "P1DoubleFault", &PR::p1_double_fault),
    number("p2_double_fault", "P2DoubleFault", &PR::p2_double_fault),
    number("p1_unf_err", "P1UnfErr", &PR::p1_unf_err),
    number("p2_unf_err", "P2UnfErr", &PR::p2_unf_err),
    number("p1_net_pt", "P1NetPoint", &PR::p1_net_pt),
    number("p2_net_pt", "P2NetPoint", &PR::p2_net_pt),
    number("p1_net_pt_won", "P1NetPointWon", &PR::p1_net_pt_won),
    number("p2_net_pt_won", "P2NetPointWon", &PR::p2_net_pt_won),
    number("p1_break_pt_missed", "P1BreakPointMissed", &PR::p1_break_pt_missed),
    number("p2_break_pt_missed", "P2BreakPointMissed", &PR::p2_break_pt_missed),
    number("p1_distance_run", "P1DistanceRun", &PR::p1_distance_run),
    number("p2_distance_run", "P2DistanceRun", &PR::p2_distance_run),
    number("rally_count", "RallyCount", &PR::rally_count),
    number("speed_mph", "Speed_MPH", &PR::speed_mph),
    category("serve_width", "ServeWidth", &PR::serve_width),
    category("serve_depth", "ServeDepth", &PR::serve_depth),
    category("return_depth", "ReturnDepth", &PR::return_depth),
};

constexpr std::string_view kContinuous[] = {"speed_mph", "p1_distance_run", "p2_distance_run",
                                            "rally_count"};

bool is_missing_token(std::string_view s) {
  return s.empty() || s == "NA" || s == "NaN" || s == "nan" || s == "null";
}

std::string at_line(std::size_t line_no) { return " (row " + std::to_string(line_no) + ")"; }

int parse_int(std::string_view s, std::string_view column, std::size_t line_no) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError("malformed integer '" + std::string(s) + "' in column " + std::string(column) +
                     at_line(line_no));
  return v;
}

double parse_double(std::string_view s, std::string_view column, std::size_t line_no) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ParseError("malformed number '" + std::string(s) + "' in column " + std::string(column) +
                     at_line(line_no));
  return v;
}

std::string format_cell(const PointRecord& r, const Column& c) {
  switch (c.kind) {
    case ColumnKind::text:
      return r.*(c.text);
    case ColumnKind::integer:
    case ColumnKind::score:
      return std::to_string(r.*(c.integer));
    case ColumnKind::clock:
      return format_clock(r.*(c.integer));
    case ColumnKind::number: {
      const auto& v = r.*(c.number);
      return v ? csv::format_number(*v) : std::string();
    }
    case ColumnKind::category: {
      const auto& v = r.*(c.category);
      return v ? *v : std::string();
    }
  }
  return {};
}

bool field_present(const PointRecord& r, const Column& c) {
  if (c.kind == ColumnKind::number) return (r.*(c.number)).has_value();
  if (c.kind == ColumnKind::category) return (r.*(c.category)).has_value();
  return true;
}

}  // namespace

std::optional<double> PointRecord::flag(Flag f, Player p) const {
  const bool one = p == Player::one;
  switch (f) {
    case Flag::ace: return one ? p1_ace : p2_ace;
    case Flag::winner: return one ? p1_winner : p2_winner;
    case Flag::double_fault: return one ? p1_double_fault : p2_double_fault;
    case Flag::unforced_error: return one ? p1_unf_err : p2_unf_err;
    case Flag::net_approach: return one ? p1_net_pt : p2_net_pt;
    case Flag::net_point_won: return one ? p1_net_pt_won : p2_net_pt_won;
    case Flag::break_point_missed: return one ? p1_break_pt_missed : p2_break_pt_missed;
  }
  return std::nullopt;
}

const std::string& MatchTimeline::player_name(Player p) const {
  static const std::string empty;
  if (records.empty()) return empty;
  return p == Player::one ? records.front().player1 : records.front().player2;
}

std::span<const Column> columns() { return kColumns; }

const Column* find_column(std::string_view name) {
  for (const auto& c : kColumns)
    if (c.name == name || c.alias == name) return &c;
  return nullptr;
}

bool Schema::has(std::string_view canonical_name) const {
  return std::any_of(mapped.begin(), mapped.end(),
                     [&](const Column* c) { return c && c->name == canonical_name; });
}

std::vector<const Column*> Schema::optional_columns() const {
  std::vector<const Column*> out;
  for (const Column* c : mapped)
    if (c && c->optional_field()) out.push_back(c);
  return out;
}

Schema Schema::canonical() {
  Schema s;
  for (const auto& c : kColumns) {
    s.header.emplace_back(c.name);
    s.mapped.push_back(&c);
  }
  return s;
}

std::optional<double> MissingReport::rate(std::string_view column) const {
  for (const auto& [name, r] : rates)
    if (name == column) return r;
  return std::nullopt;
}

int parse_score_token(std::string_view token) {
  if (token == "0") return 0;
  if (token == "15") return 15;
  if (token == "30") return 30;
  if (token == "40") return 40;
  if (token == "AD" || token == "55") return 55;  // 55 is the converted form written back out
  throw ParseError("unknown score token '" + std::string(token) + "'");
}

int parse_score_token(std::string_view token, bool tiebreak, std::size_t line_no) {
  if (tiebreak && !token.empty() &&
      std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return parse_int(token, "score", line_no);
  try {
    return parse_score_token(token);
  } catch (const ParseError&) {
    throw ParseError("unknown score token '" + std::string(token) + "'" + at_line(line_no));
  }
}

int parse_clock(std::string_view text) {
  int parts[3] = {0, 0, 0};
  int count = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto colon = text.find(':', start);
    const auto piece = text.substr(start, colon == std::string_view::npos ? text.npos : colon - start);
    if (count == 3 || piece.empty()) throw ParseError("malformed clock '" + std::string(text) + "'");
    int v = 0;
    auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
    if (ec != std::errc{} || ptr != piece.data() + piece.size() || v < 0)
      throw ParseError("malformed clock '" + std::string(text) + "'");
    parts[count++] = v;
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (count != 3 || parts[1] > 59 || parts[2] > 59)
    throw ParseError("malformed clock '" + std::string(text) + "', expected h:mm:ss");
  return parts[0] * 3600 + parts[1] * 60 + parts[2];
}

std::string format_clock(int seconds) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02d:%02d:%02d", seconds / 3600, (seconds / 60) % 60, seconds % 60);
  return buf;
}

Dataset parse_dataset(std::istream& in, const std::string& source) {
  Dataset data;
  std::size_t line_no = 0;
  csv::Row row;
  if (!csv::read_row(in, row, line_no)) throw SchemaError(source + ": missing header row");

  auto& schema = data.schema;
  for (auto& name : row) {
    if (!name.empty() && name.front() == '\xEF' && name.rfind("\xEF\xBB\xBF", 0) == 0)
      name.erase(0, 3);  // UTF-8 BOM
    const Column* c = find_column(name);
    if (c && schema.has(c->name)) c = nullptr;  // duplicate: keep first mapping
    schema.header.push_back(name);
    schema.mapped.push_back(c);
    if (!c) schema.passthrough_names.push_back(name);
  }
  std::vector<std::string> missing;
  for (const auto& c : kColumns)
    if (c.required() && !schema.has(c.name)) missing.emplace_back(c.name);
  if (!missing.empty()) {
    std::string msg = source + ": missing required column(s):";
    for (const auto& m : missing) msg += " " + m;
    throw SchemaError(msg);
  }

  while (csv::read_row(in, row, line_no)) {
    if (row.size() == 1 && row[0].empty()) continue;  // blank line
    if (row.size() != schema.header.size())
      throw ParseError(source + ": expected " + std::to_string(schema.header.size()) + " fields, got " +
                       std::to_string(row.size()) + at_line(line_no));
    PointRecord r;
    std::vector<std::pair<const Column*, std::string_view>> scores;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const Column* c = schema.mapped[i];
      const std::string& cell = row[i];
      if (!c) {
        r.passthrough.push_back(cell);
        continue;
      }
      if (c->required() && c->kind != ColumnKind::text && cell.empty())
        throw ParseError(source + ": empty required field " + std::string(c->name) + at_line(line_no));
      switch (c->kind) {
        case ColumnKind::text:
          r.*(c->text) = cell;
          break;
        case ColumnKind::integer:
          r.*(c->integer) = parse_int(cell, c->name, line_no);
          break;
        case ColumnKind::clock:
          try {
            r.*(c->integer) = parse_clock(cell);
          } catch (const ParseError& e) {
            throw ParseError(source + ": " + e.what() + at_line(line_no));
          }
          break;
        case ColumnKind::score:
          scores.emplace_back(c, cell);
          break;
        case ColumnKind::number:
          if (!is_missing_token(cell)) r.*(c->number) = parse_double(cell, c->name, line_no);
          break;
        case ColumnKind::category:
          if (!is_missing_token(cell)) r.*(c->category) = cell;
          break;
      }
    }
    for (const auto& [c, cell] : scores) {
      try {
        r.*(c->integer) = parse_score_token(cell, r.is_tiebreak(), line_no);
      } catch (const ParseError& e) {
        throw ParseError(source + ": " + e.what());
      }
    }
    if (r.point_victor != 1 && r.point_victor != 2)
      throw ParseError(source + ": point_victor must be 1 or 2" + at_line(line_no));
    if (r.set_no < 1 || r.game_no < 1 || r.point_no < 1)
      throw ParseError(source + ": set/game/point numbers must be positive" + at_line(line_no));
    data.records.push_back(std::move(r));
  }
  return data;
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_dataset(in, path.string());
}

std::string write_dataset(const Dataset& data) {
  std::string out = csv::join(data.schema.header);
  out.push_back('\n');
  csv::Row row;
  for (const auto& r : data.records) {
    row.clear();
    std::size_t pass = 0;
    for (const Column* c : data.schema.mapped) {
      if (c)
        row.push_back(format_cell(r, *c));
      else
        row.push_back(pass < r.passthrough.size() ? r.passthrough[pass++] : std::string());
    }
    out += csv::join(row);
    out.push_back('\n');
  }
  return out;
}

std::vector<MatchTimeline> group_matches(std::vector<PointRecord> records) {
  std::vector<MatchTimeline> out;
  std::map<std::string, std::size_t> slot;
  for (auto& r : records) {
    auto [it, inserted] = slot.try_emplace(r.match_id, out.size());
    if (inserted) out.push_back(MatchTimeline{r.match_id, {}});
    out[it->second].records.push_back(std::move(r));
  }
  for (auto& m : out) {
    auto key = [](const PointRecord& r) { return std::tuple(r.set_no, r.game_no, r.point_no); };
    std::stable_sort(m.records.begin(), m.records.end(),
                     [&](const PointRecord& a, const PointRecord& b) { return key(a) < key(b); });
    for (std::size_t i = 1; i < m.records.size(); ++i)
      if (!(key(m.records[i - 1]) < key(m.records[i]))) {
        const auto& r = m.records[i];
        throw DataError("match " + m.match_id + ": duplicate point key (set " +
                        std::to_string(r.set_no) + ", game " + std::to_string(r.game_no) +
                        ", point " + std::to_string(r.point_no) + ")");
      }
  }
  return out;
}

std::vector<MatchTimeline> load_matches(const std::filesystem::path& path) {
  return group_matches(read_dataset(path).records);
}

MissingReport missing_rate(std::span<const PointRecord> records, const Schema& schema) {
  if (records.empty()) throw DataError("missing_rate: empty input");
  MissingReport report;
  const double n = static_cast<double>(records.size());
  for (const Column* c : schema.optional_columns()) {
    std::size_t absent = 0;
    for (const auto& r : records)
      if (!field_present(r, *c)) ++absent;
    report.rates.emplace_back(std::string(c->name), static_cast<double>(absent) / n);
  }
  return report;
}

std::vector<PointRecord> impute_missing(std::span<const PointRecord> records, const Schema& schema) {
  const auto optional = schema.optional_columns();
  std::vector<const Column*> numeric;
  for (const Column* c : schema.mapped)
    if (c && c->kind != ColumnKind::text && c->kind != ColumnKind::category) numeric.push_back(c);

  auto value = [](const PointRecord& r, const Column& c) -> std::optional<double> {
    if (c.kind == ColumnKind::number) return r.*(c.number);
    return static_cast<double>(r.*(c.integer));
  };
  auto complete = [&](const PointRecord& r) {
    return std::all_of(optional.begin(), optional.end(),
                       [&](const Column* c) { return field_present(r, *c); });
  };

  std::vector<std::size_t> donors;
  for (std::size_t i = 0; i < records.size(); ++i)
    if (complete(records[i])) donors.push_back(i);

  std::vector<PointRecord> out(records.begin(), records.end());
  if (donors.size() == records.size()) return out;
  if (donors.empty()) throw DataError("imputation impossible: no complete record");

  for (auto& r : out) {
    if (complete(r)) continue;
    std::size_t best = donors.front();
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t j : donors) {
      double d2 = 0;
      for (const Column* c : numeric) {
        const auto a = value(r, *c);
        if (!a) continue;
        const double diff = *a - *value(records[j], *c);
        d2 += diff * diff;
      }
      if (d2 < best_d2) {
        best_d2 = d2;
        best = j;
      }
    }
    const PointRecord& donor = records[best];
    for (const Column* c : optional) {
      if (field_present(r, *c)) continue;
      if (c->kind == ColumnKind::number)
        r.*(c->number) = donor.*(c->number);
      else
        r.*(c->category) = donor.*(c->category);
    }
  }
  return out;
}

double quantile_linear(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ArgumentError("quantile of empty data");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

BoxplotStats boxplot(std::string column, std::vector<double> values) {
  if (values.empty()) throw ArgumentError("boxplot of empty column " + column);
  std::sort(values.begin(), values.end());
  BoxplotStats s;
  s.column = std::move(column);
  s.count = values.size();
  s.min = values.front();
  s.max = values.back();
  s.q1 = quantile_linear(values, 0.25);
  s.median = quantile_linear(values, 0.5);
  s.q3 = quantile_linear(values, 0.75);
  const double iqr = s.q3 - s.q1;
  s.lower_fence = s.q1 - 1.5 * iqr;
  s.upper_fence = s.q3 + 1.5 * iqr;
  s.outlier_count = static_cast<std::size_t>(std::count_if(
      values.begin(), values.end(), [&](double v) { return v < s.lower_fence || v > s.upper_fence; }));
  return s;
}

BoxplotReport outlier_report(std::span<const PointRecord> records, const Schema& schema) {
  BoxplotReport report;
  for (std::string_view name : kContinuous) {
    if (!schema.has(name)) continue;
    const Column* c = find_column(name);
    std::vector<double> values;
    for (const auto& r : records)
      if (auto v = r.*(c->number)) values.push_back(*v);
    if (values.size() < 4) {
      report.warnings.push_back(std::string(name) + ": fewer than 4 values, skipped");
      continue;
    }
    report.columns.push_back(boxplot(std::string(name), std::move(values)));
  }
  return report;
}

}  // namespace tennis::ingest
