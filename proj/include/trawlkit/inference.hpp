#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "trawlkit/time_series.hpp"
#include "trawlkit/trawl_model.hpp"

namespace trawlkit {

enum class StatKind {
  Infeasible,             ///< closed-form variance
  Feasible,               ///< estimated variance, no bias correction
  FeasibleBiasCorrected,  ///< estimated variance, numerator minus delta/2 a_hat'(t)
  FeasibleT0,             ///< t = 0: sqrt(n delta / Q_n)(a_hat(0) - a(0) - delta/2 a_hat'(0))
  FeasibleT0Gaussian,     ///< t = 0, Gaussian seed: subsampled derivative, scaled by sqrt(3)
};

[[nodiscard]] std::string_view to_string(StatKind k);
[[nodiscard]] StatKind stat_kind_from_string(std::string_view s);

/// The model that generated the data; used for centering and the infeasible variance.
struct TrueModel {
  TrawlSpec trawl;
  double c4 = 0.0;
};

struct CltStatistic {
  StatKind kind = StatKind::Feasible;
  double t = 0.0;
  double value = 0.0;
  bool degenerate = false;  ///< variance was clamped or zero; value may be non-finite
};

struct StatisticOptions {
  /// Center at a(floor(t/delta) delta) instead of a(t).
  bool grid_centering = false;
  std::optional<std::size_t> N_n;
  std::optional<std::size_t> K_n;
  /// Replaces the variance in the denominator (any kind).
  std::optional<double> sigma2_override;
};

/// One statistic at time t.
[[nodiscard]] CltStatistic statistic(const TimeSeries& series, double t,
                                     const std::optional<TrueModel>& truth, StatKind kind,
                                     const StatisticOptions& opts = {});

/// Several statistics on one series, sharing the autocovariance work.
/// Result is ordered time-major: for each t, every kind in order.
[[nodiscard]] std::vector<CltStatistic> statistics(const TimeSeries& series,
                                                   std::span<const double> times,
                                                   const TrueModel& truth,
                                                   std::span<const StatKind> kinds,
                                                   const StatisticOptions& opts = {});

/// sigma_a^2(t) = c4 a(t) + 2 { int_0^inf a^2 + int_0^t a(t-s) a(t+s) ds
///                              - int_t^inf a(s-t) a(t+s) ds }.
[[nodiscard]] double closed_form_sigma2(const TrawlSpec& trawl, double c4, double t);

inline const std::vector<double> kDefaultCoverageLevels = {0.75, 0.80, 0.85, 0.90, 0.95, 0.99};

struct CoverageSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;  ///< (R-1) divisor
  std::vector<double> coverage;  ///< per level
};

struct CoverageReport {
  std::vector<double> levels;
  CoverageSummary non_degenerate;
  CoverageSummary all_runs;  ///< every statistic with a finite value
  std::size_t degenerate = 0;
};

/// Empirical coverage: fraction with |T| <= Phi^{-1}((1+q)/2) for each level q.
[[nodiscard]] CoverageReport coverage(std::span<const CltStatistic> stats,
                                      std::span<const double> levels = kDefaultCoverageLevels);

}  // namespace trawlkit
