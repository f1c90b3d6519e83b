#include "tennis/csv.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

#include "tennis/error.hpp"

namespace tennis::csv {

bool read_row(std::istream& in, Row& row, std::size_t& line_no) {
  row.clear();
  std::string line;
  if (!std::getline(in, line)) return false;
  ++line_no;

  std::string field;
  bool quoted = false;
  std::size_t i = 0;
  for (;;) {
    if (i == line.size()) {
      if (quoted) {
        // Quoted field spans a line break.
        std::string next;
        if (!std::getline(in, next))
          throw ParseError("unterminated quoted field at line " + std::to_string(line_no));
        ++line_no;
        field.push_back('\n');
        line = std::move(next);
        i = 0;
        continue;
      }
      break;
    }
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\r' && i + 1 == line.size()) {
      // CRLF
    } else {
      field.push_back(c);
    }
    ++i;
  }
  row.push_back(std::move(field));
  return true;
}

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string join(const Row& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out.push_back(',');
    out += quote(row[i]);
  }
  return out;
}

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error("number formatting failed");
  return std::string(buf, end);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace tennis::csv
