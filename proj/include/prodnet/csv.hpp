#pragma once

#include <charconv>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "prodnet/errors.hpp"

namespace prodnet {

// Minimal strict CSV layer. Comma separated, UTF-8, mandatory header row,
// constant column count, no quoting (none of the formats used here needs
// embedded commas). Lines may end in \n or \r\n; blank lines are rejected
// except for one trailing newline.

struct CsvTable {
  std::string path;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index by exact header name.
  std::size_t col(const std::string& name) const {
    for (std::size_t k = 0; k < header.size(); ++k)
      if (header[k] == name) return k;
    throw MissingColumn(path, name);
  }

  bool has_col(const std::string& name) const {
    for (const auto& h : header)
      if (h == name) return true;
    return false;
  }
};

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace detail

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvFormat(path, 0, "cannot open file");
  CsvTable t;
  t.path = path;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (in.peek() == std::char_traits<char>::eof()) break;
      throw CsvFormat(path, lineno, "blank line");
    }
    auto fields = detail::split_csv_line(line);
    if (lineno == 1) {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size())
      throw CsvFormat(path, lineno,
                      "expected " + std::to_string(t.header.size()) +
                          " fields, got " + std::to_string(fields.size()));
    t.rows.push_back(std::move(fields));
  }
  if (t.header.empty()) throw CsvFormat(path, 0, "missing header row");
  return t;
}

inline bool is_na(std::string_view s) { return s == "NA" || s.empty(); }

inline double parse_double(std::string_view s, const std::string& path,
                           long line) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && s.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw CsvFormat(path, line, "bad number: '" + std::string(s) + "'");
  return v;
}

inline long parse_long(std::string_view s, const std::string& path,
                       long line) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw CsvFormat(path, line, "bad integer: '" + std::string(s) + "'");
  return v;
}

// Shortest representation that parses back to the same double. Keeps output
// files byte-stable across runs and platforms with the same FP semantics.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header)
      : path_(path), out_(path, std::ios::binary), width_(header.size()) {
    if (!out_) throw CsvFormat(path, 0, "cannot open file for writing");
    write_row(header);
  }

  void write_row(const std::vector<std::string>& fields) {
    if (fields.size() != width_)
      throw CsvFormat(path_, -1, "row width mismatch on write");
    for (std::size_t k = 0; k < fields.size(); ++k) {
      if (k) out_ << ',';
      out_ << fields[k];
    }
    out_ << '\n';
  }

  void flush() { out_.flush(); }

 private:
  std::string path_;
  std::ofstream out_;
  std::size_t width_;
};

}  // namespace prodnet
