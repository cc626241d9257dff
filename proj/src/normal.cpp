#include "trawlkit/normal.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "trawlkit/errors.hpp"

namespace trawlkit {

double normal_cdf(double x) {
  if (std::isinf(x)) {
    return x > 0 ? 1.0 : 0.0;
  }
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("normal quantile requires p in (0,1)");
  }
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

}  // namespace trawlkit
