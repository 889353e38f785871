#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <string>

#include "lstcn/data.hpp"
#include "lstcn/error.hpp"
#include "lstcn/number_format.hpp"

namespace lstcn {

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

double parse_double(std::string_view text, std::size_t line) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ParseError("not a number: '" + std::string(text) + "'", line);
  }
  return value;
}

long long parse_integer(std::string_view text, std::size_t line) {
  text = trim(text);
  long long value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ParseError("not an integer: '" + std::string(text) + "'", line);
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char delim) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(delim, start);
    if (pos == std::string_view::npos) {
      fields.push_back(text.substr(start));
      return fields;
    }
    fields.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view text) {
  constexpr std::string_view ws = " \t\r\n";
  const auto first = text.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(ws);
  return text.substr(first, last - first + 1);
}

namespace {

int digits(std::string_view text, std::size_t pos, std::size_t count) {
  if (pos + count > text.size()) throw ParseError("truncated timestamp");
  int value = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    const char ch = text[i];
    if (ch < '0' || ch > '9') throw ParseError("bad timestamp: '" + std::string(text) + "'");
    value = value * 10 + (ch - '0');
  }
  return value;
}

void expect(std::string_view text, std::size_t pos, std::string_view allowed) {
  if (pos >= text.size() || allowed.find(text[pos]) == std::string_view::npos) {
    throw ParseError("bad timestamp: '" + std::string(text) + "'");
  }
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ParseError("empty timestamp");
  // Epoch seconds: an optionally signed run of digits.
  if (text.size() < 5 || text[4] != '-') return parse_integer(text);

  using namespace std::chrono;
  const int y = digits(text, 0, 4);
  expect(text, 4, "-");
  const int mo = digits(text, 5, 2);
  expect(text, 7, "-");
  const int d = digits(text, 8, 2);
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw ParseError("invalid date: '" + std::string(text) + "'");

  int hh = 0, mm = 0, ss = 0;
  std::size_t pos = 10;
  if (pos < text.size()) {
    expect(text, pos, "T ");
    hh = digits(text, pos + 1, 2);
    expect(text, pos + 3, ":");
    mm = digits(text, pos + 4, 2);
    pos += 6;
    if (pos < text.size() && text[pos] == ':') {
      ss = digits(text, pos + 1, 2);
      pos += 3;
      // Fractional seconds are truncated.
      if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
      }
    }
  }
  if (hh > 23 || mm > 59 || ss > 60) throw ParseError("invalid time: '" + std::string(text) + "'");

  long long offset = 0;
  if (pos < text.size()) {
    if (text[pos] == 'Z') {
      ++pos;
    } else {
      expect(text, pos, "+-");
      const int sign = text[pos] == '-' ? -1 : 1;
      const int oh = digits(text, pos + 1, 2);
      std::size_t next = pos + 3;
      if (next < text.size() && text[next] == ':') ++next;
      const int om = digits(text, next, 2);
      offset = sign * (oh * 3600LL + om * 60LL);
      pos = next + 2;
    }
  }
  if (pos != text.size()) throw ParseError("trailing characters in timestamp: '" + std::string(text) + "'");

  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<Timestamp>(days) * 86400 + hh * 3600LL + mm * 60LL + ss - offset;
}

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const long long day_count = (t >= 0 ? t : t - 86399) / 86400;
  const long long rem = t - day_count * 86400;
  const year_month_day ymd{sys_days{days{day_count}}};
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), rem / 3600, (rem / 60) % 60, rem % 60);
  return buf;
}

TimeSeries parse_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t ts_col = 0;
  std::vector<std::size_t> var_cols;
  TimeSeries out;
  std::vector<std::vector<double>> columns;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    const auto fields = split(row, ',');
    if (!have_header) {
      bool found = false;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string_view name = trim(fields[i]);
        if (name == "timestamp") {
          if (found) throw ParseError("duplicate 'timestamp' column", line_no);
          ts_col = i;
          found = true;
        } else {
          if (name.empty()) throw ParseError("empty column name", line_no);
          out.variables.emplace_back(name);
          var_cols.push_back(i);
        }
      }
      if (!found) throw ParseError("header has no 'timestamp' column", line_no);
      if (var_cols.empty()) throw ParseError("header names no variable columns", line_no);
      columns.resize(var_cols.size());
      have_header = true;
      continue;
    }
    if (fields.size() != var_cols.size() + 1) {
      throw ParseError("expected " + std::to_string(var_cols.size() + 1) + " fields, got " +
                       std::to_string(fields.size()), line_no);
    }
    try {
      out.timestamps.push_back(parse_timestamp(fields[ts_col]));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
    for (std::size_t v = 0; v < var_cols.size(); ++v) {
      const std::string_view field = trim(fields[var_cols[v]]);
      columns[v].push_back(field.empty() ? std::numeric_limits<double>::quiet_NaN()
                                         : parse_double(field, line_no));
    }
  }
  if (!have_header) throw ParseError("empty CSV input");
  if (out.timestamps.empty()) throw ParseError("CSV has a header but no data rows");

  const auto m = static_cast<Eigen::Index>(columns.size());
  const auto t = static_cast<Eigen::Index>(out.timestamps.size());
  out.values.resize(m, t);
  for (Eigen::Index v = 0; v < m; ++v) {
    out.values.row(v) = Eigen::Map<const RowVector>(columns[v].data(), t);
  }
  return out;
}

TimeSeries load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return parse_csv(in);
}

}  // namespace lstcn
