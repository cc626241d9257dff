#pragma once

namespace trawlkit {

/// Standard normal distribution function.
[[nodiscard]] double normal_cdf(double x);

/// Standard normal quantile for p in (0,1).
[[nodiscard]] double normal_quantile(double p);

}  // namespace trawlkit
