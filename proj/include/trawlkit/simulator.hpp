#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "trawlkit/rng.hpp"
#include "trawlkit/time_series.hpp"
#include "trawlkit/trawl_model.hpp"

namespace trawlkit {

/// Relative tail mass left out by the default truncation time.
inline constexpr double kDefaultTailTolerance = 1e-6;

struct SimConfig {
  TrawlSpec trawl;
  SeedSpec seed;
  double delta = 0.1;
  std::size_t n = 1000;
  /// Truncation time T_max. When empty it is chosen from the tail tolerance,
  /// capped at 10 * n * delta and at the work budget.
  std::optional<double> tail_cutoff;
  std::uint64_t rng_seed = 0;
  /// Independent stream index (Monte Carlo run number).
  std::uint64_t stream = 0;
};

/// Slice partition of one column (time strip of width delta) of the trawl set.
///
/// Slice k of the column born at grid time j belongs to the trawl sets of
/// observations j, j+1, ..., j+k. Slices are stationary in j, so the table
/// stores one area per k. The last slice (k = J-1) also carries the
/// truncated tail mass spread evenly over the J columns alive at any time,
/// so the marginal area of every observation equals Leb(A).
struct SliceTable {
  double delta = 0.0;
  std::vector<double> areas;  ///< areas[k], k = 0..J-1, remainder included in the last
  double remainder = 0.0;     ///< tail area per column added to the last slice
  double tail_area = 0.0;     ///< integral of a over [J delta, inf)

  [[nodiscard]] std::size_t columns() const noexcept { return areas.size(); }
  /// Area of the part of one column that lies in the trawl set of the
  /// observation `age` steps after the column (sum of areas[k] for k >= age).
  [[nodiscard]] double covered_area(std::size_t age) const;
  /// Sum over all slices of one column without the remainder.
  [[nodiscard]] double column_area() const;
};

/// Slice areas for truncation at J columns (T_max = J * delta).
[[nodiscard]] SliceTable slice_areas(const TrawlSpec& trawl, double delta, std::size_t J);

/// Number of columns J implied by a configuration (after defaults and caps).
/// Throws ConfigError when an explicit cutoff exceeds the memory or work budget.
[[nodiscard]] std::size_t truncation_columns(const SimConfig& cfg);

/// Exact slice-grid simulation of (X_{i delta})_{i=0..n-1}. Deterministic in
/// (rng_seed, stream).
[[nodiscard]] TimeSeries simulate(const SimConfig& cfg);

/// Draws one slice variable: the seed law with area-scaled parameters.
[[nodiscard]] double draw_slice(const SeedSpec& seed, double area, Rng& rng);

struct MomentReport {
  double empirical_mean = 0.0;
  double theoretical_mean = 0.0;
  double empirical_variance = 0.0;
  double theoretical_variance = 0.0;
  std::vector<double> empirical_acf;    ///< lags 0..max_lag (in grid steps)
  std::vector<double> theoretical_acf;  ///< Var(L') Leb(A ∩ A_{l delta})
  double quarticity = 0.0;
  double theoretical_quarticity_limit = 0.0;  ///< c4 a(0), the limit of Q_n
};

/// Empirical mean/variance/ACF of a path against the closed forms.
[[nodiscard]] MomentReport moment_check(const TimeSeries& series, const TrawlSpec& trawl,
                                        const SeedSpec& seed, std::size_t max_lag);

}  // namespace trawlkit
