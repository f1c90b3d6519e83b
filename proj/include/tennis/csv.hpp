#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace tennis::csv {

using Row = std::vector<std::string>;

/// Reads one record (RFC 4180 quoting, LF or CRLF). Returns false at end of input.
bool read_row(std::istream& in, Row& row, std::size_t& line_no);

std::string quote(std::string_view field);
std::string join(const Row& row);

/// Shortest text that round-trips the double.
std::string format_number(double v);

/// Writes `content` next to `path` and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace tennis::csv
