#include "csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

#include "errors.hpp"
#include "hash.hpp"

namespace darwinnet {

std::string to_hex16(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

namespace csv {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<Row> parse(std::string_view text, const std::vector<std::string>& header) {
  std::vector<Row> rows;
  std::size_t line_no = 0;
  bool saw_header = false;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (!saw_header) {
      if (fields != header) throw ParseError(line_no, "unexpected header '" + std::string(line) + "'");
      saw_header = true;
      continue;
    }
    if (fields.size() != header.size())
      throw ParseError(line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                    std::to_string(fields.size()));
    rows.push_back({line_no, std::move(fields)});
  }
  if (!saw_header) throw ParseError(1, "missing header row");
  return rows;
}

double to_double(const Row& row, std::size_t column) {
  const std::string& f = row.fields.at(column);
  char* end = nullptr;
  const double v = std::strtod(f.c_str(), &end);
  if (f.empty() || end != f.c_str() + f.size() || !std::isfinite(v))
    throw ParseError(row.number, "column " + std::to_string(column + 1) + ": not a number '" + f + "'");
  return v;
}

std::int64_t to_int(const Row& row, std::size_t column) {
  const std::string& f = row.fields.at(column);
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (f.empty() || ec != std::errc{} || p != f.data() + f.size())
    throw ParseError(row.number, "column " + std::to_string(column + 1) + ": not an integer '" + f + "'");
  return v;
}

std::uint64_t to_uint(const Row& row, std::size_t column) {
  const std::string& f = row.fields.at(column);
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (f.empty() || ec != std::errc{} || p != f.data() + f.size())
    throw ParseError(row.number,
                     "column " + std::to_string(column + 1) + ": not an unsigned integer '" + f + "'");
  return v;
}

}  // namespace csv
}  // namespace darwinnet
