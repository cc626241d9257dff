#pragma once

#include <cstdint>
#include <limits>

namespace trawlkit {

/// SplitMix64 finaliser; used to expand (seed, stream) keys into generator state.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// xoshiro256++ generator. A generator is keyed by (seed, stream) so that
/// Monte Carlo run r always sees the same numbers, whatever thread runs it.
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng(std::uint64_t seed, std::uint64_t stream) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on the open interval (0, 1).
  double uniform() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

/// Standard normal draw (Marsaglia polar method, no cached second value).
double draw_standard_normal(Rng& rng);

/// Poisson(mean); mean >= 0.
std::uint64_t draw_poisson(Rng& rng, double mean);

/// Logarithmic(theta): P(K = k) = -theta^k / (k log(1 - theta)), k >= 1.
std::uint64_t draw_logarithmic(Rng& rng, double theta);

/// Gamma(shape, scale); accurate for very small shapes (returns 0 when the
/// draw underflows).
double draw_gamma(Rng& rng, double shape, double scale);

}  // namespace trawlkit
