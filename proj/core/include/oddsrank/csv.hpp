#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace oddsrank::csv {

struct Row {
  std::size_t line = 0;  // 1-based
  std::vector<std::string> fields;
};

/// Splits RFC 4180 style text (quoted fields, doubled quotes, CRLF or LF).
/// Lines that are entirely blank are dropped. Invalid UTF-8 lines are
/// transcoded from Latin-1.
std::vector<Row> parse(std::string_view text);

std::string read_file(const std::filesystem::path& path);

/// Quotes a field when it contains a separator, quote or newline.
std::string escape(std::string_view field);

std::string trim(std::string_view s);

bool valid_utf8(std::string_view s);
std::string latin1_to_utf8(std::string_view s);

}  // namespace oddsrank::csv
