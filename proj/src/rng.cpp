#include "trawlkit/rng.hpp"

#include <cmath>
#include <random>

namespace trawlkit {

Rng::Rng(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t key = seed;
  const std::uint64_t a = splitmix64(key);
  std::uint64_t state = a ^ (stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL);
  for (auto& word : s_) {
    word = splitmix64(state);
  }
}

double draw_standard_normal(Rng& rng) {
  for (;;) {
    const double u = 2.0 * rng.uniform() - 1.0;
    const double v = 2.0 * rng.uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

std::uint64_t draw_poisson(Rng& rng, double mean) {
  if (mean <= 0.0) {
    return 0;
  }
  if (mean < 30.0) {
    // sequential inversion
    double p = std::exp(-mean);
    double cdf = p;
    const double u = rng.uniform();
    std::uint64_t k = 0;
    // the cap only matters when rounding keeps cdf below u
    while (u > cdf && k < 1000) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(rng);
}

std::uint64_t draw_logarithmic(Rng& rng, double theta) {
  // Kemp (1981), algorithm LK
  const double r = std::log1p(-theta);
  const double v = rng.uniform();
  if (v >= theta) {
    return 1;
  }
  const double u = rng.uniform();
  const double q = -std::expm1(r * u);
  if (v <= q * q) {
    const double k = std::floor(1.0 + std::log(v) / std::log(q));
    return k < 1.0 ? 1 : static_cast<std::uint64_t>(k);
  }
  return v >= q ? 1 : 2;
}

namespace {

// Marsaglia & Tsang (2000) for shape >= 1, unit scale.
double marsaglia_tsang(Rng& rng, double shape) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = draw_standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) {
      return d * v;
    }
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return d * v;
    }
  }
}

}  // namespace

double draw_gamma(Rng& rng, double shape, double scale) {
  if (shape >= 1.0) {
    return scale * marsaglia_tsang(rng, shape);
  }
  // G(shape) = G(shape + 1) * U^(1/shape), combined in log space
  const double log_g = std::log(marsaglia_tsang(rng, shape + 1.0)) + std::log(rng.uniform()) / shape;
  return scale * std::exp(log_g);
}

}  // namespace trawlkit
