#include "trawlkit/time_series.hpp"

#include <cmath>
#include <string>

#include "trawlkit/errors.hpp"

namespace trawlkit {

TimeSeries::TimeSeries(double delta_, std::vector<double> values_)
    : delta(delta_), values(std::move(values_)) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw DomainError("grid width delta must be positive and finite");
  }
  if (values.size() < 2) {
    throw InsufficientDataError("insufficient data: a time series needs at least 2 observations");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw DomainError("non-finite value at index " + std::to_string(i));
    }
  }
}

}  // namespace trawlkit
