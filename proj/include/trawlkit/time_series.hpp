#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace trawlkit {

/// Equidistant observations x_0..x_{n-1} on the grid i * delta.
struct TimeSeries {
  double delta = 1.0;
  std::vector<double> values;

  TimeSeries() = default;
  /// Validates delta > 0, n >= 2 and finite values.
  TimeSeries(double delta, std::vector<double> values);

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
  [[nodiscard]] std::span<const double> view() const noexcept { return values; }
  [[nodiscard]] double time(std::size_t i) const noexcept { return static_cast<double>(i) * delta; }
};

}  // namespace trawlkit
