#pragma once

#include <iosfwd>
#include <string>

#include "trawlkit/time_series.hpp"

namespace trawlkit {

/// Significant digits that make a double round-trip exactly.
inline constexpr int kLosslessPrecision = 17;

/// %g formatting with `precision` significant digits; NaN prints as "nan".
[[nodiscard]] std::string format_number(double x, int precision = 6);

/// Series CSV: an optional `# delta=<d>` comment, a `time,value` header and
/// rows at times i * delta. Delta comes from the header or the first two
/// rows; both must agree within 1e-9 relative when present.
[[nodiscard]] TimeSeries parse_series(std::istream& in);
[[nodiscard]] TimeSeries parse_series_file(const std::string& path);

void write_series(std::ostream& out, const TimeSeries& series, int precision = kLosslessPrecision);
void write_series_file(const std::string& path, const TimeSeries& series,
                       int precision = kLosslessPrecision);

/// Writes text to `path`, or to stdout when path is "-".
void write_text_file(const std::string& path, const std::string& text);

}  // namespace trawlkit
