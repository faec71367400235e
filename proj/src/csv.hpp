#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Minimal reader for the unquoted, comma-separated files this project writes.
namespace darwinnet::csv {

struct Row {
  std::size_t number;  // 1-based line number, header is line 1
  std::vector<std::string> fields;
};

// Splits text into rows and checks the header matches `header` exactly.
// Blank trailing lines are ignored. Throws ParseError on a header mismatch or
// on a row whose field count differs from the header.
std::vector<Row> parse(std::string_view text, const std::vector<std::string>& header);

double to_double(const Row& row, std::size_t column);
std::int64_t to_int(const Row& row, std::size_t column);
std::uint64_t to_uint(const Row& row, std::size_t column);

std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, char sep);

}  // namespace darwinnet::csv
