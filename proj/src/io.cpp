#include "trawlkit/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string_view>
#include <vector>

#include "trawlkit/errors.hpp"

namespace trawlkit {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

bool close(double a, double b, double scale) { return std::abs(a - b) <= 1e-9 * scale; }

}  // namespace

std::string format_number(double x, int precision) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, x);
  return buf;
}

TimeSeries parse_series(std::istream& in) {
  std::optional<double> header_delta;
  std::vector<double> times;
  std::vector<double> values;
  bool seen_header = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view s = trim(line);
    if (s.empty()) continue;
    if (s.front() == '#') {
      const std::string_view body = trim(s.substr(1));
      if (body.rfind("delta", 0) == 0) {
        const auto eq = body.find('=');
        const auto d = eq == std::string_view::npos ? std::nullopt : to_double(body.substr(eq + 1));
        if (!d || !(*d > 0.0)) {
          throw ParseError("line " + std::to_string(line_no) + ": malformed delta header");
        }
        header_delta = *d;
      }
      continue;
    }
    const auto comma = s.find(',');
    if (!seen_header && times.empty()) {
      if (comma != std::string_view::npos && trim(s.substr(0, comma)) == "time" &&
          trim(s.substr(comma + 1)) == "value") {
        seen_header = true;
        continue;
      }
      if (!to_double(s.substr(0, comma == std::string_view::npos ? s.size() : comma))) {
        throw ParseError("line " + std::to_string(line_no) + ": expected header 'time,value'");
      }
    }
    const std::size_t row = times.size() + 1;
    if (comma == std::string_view::npos) {
      throw ParseError("data row " + std::to_string(row) + ": missing value");
    }
    const auto t = to_double(s.substr(0, comma));
    const auto v = to_double(s.substr(comma + 1));
    if (!t) throw ParseError("data row " + std::to_string(row) + ": missing or invalid time");
    if (!v) throw ParseError("data row " + std::to_string(row) + ": missing or invalid value");
    times.push_back(*t);
    values.push_back(*v);
  }
  if (times.size() < 2) {
    throw InsufficientDataError("insufficient data: a series needs at least 2 rows, got " +
                                std::to_string(times.size()));
  }
  const double inferred = times[1] - times[0];
  double delta = header_delta.value_or(inferred);
  if (header_delta && !close(inferred, *header_delta, *header_delta)) {
    throw ParseError("data row 2: time step " + format_number(inferred, 10) +
                     " disagrees with header delta=" + format_number(*header_delta, 10));
  }
  if (!(delta > 0.0)) {
    throw ParseError("data row 2: times must be strictly increasing");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double expected = times[0] + static_cast<double>(i) * delta;
    if (!close(times[i], expected, std::max(std::abs(expected), delta))) {
      throw ParseError("data row " + std::to_string(i + 1) + ": time " +
                       format_number(times[i], 12) + " is off the grid (expected " +
                       format_number(expected, 12) + ")");
    }
  }
  return TimeSeries(delta, std::move(values));
}

TimeSeries parse_series_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open '" + path + "'");
  }
  return parse_series(in);
}

void write_series(std::ostream& out, const TimeSeries& series, int precision) {
  out << "# delta=" << format_number(series.delta, kLosslessPrecision) << "\n";
  out << "time,value\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << format_number(series.time(i), precision) << ','
        << format_number(series.values[i], precision) << '\n';
  }
}

void write_series_file(const std::string& path, const TimeSeries& series, int precision) {
  std::ostringstream os;
  write_series(os, series, precision);
  write_text_file(path, os.str());
}

void write_text_file(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ParseError("cannot write '" + path + "'");
  }
  out << text;
  if (!out) {
    throw ParseError("error writing '" + path + "'");
  }
}

}  // namespace trawlkit
