#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trawlkit/time_series.hpp"

namespace trawlkit {

/// Point predictor for X_{t+h} given observations up to t.
struct Predictor {
  enum class Kind { TrawlSum, EmpiricalAcf, Naive, ParametricSupGammaNB };
  Kind kind = Kind::TrawlSum;
  // parametric supGamma / negative binomial model, a(x) = c (1 + x/alpha)^(-H)
  double alpha = 0.0;
  double H = 0.0;
  double c = 1.0;
  double theta = 0.0;

  static Predictor trawl_sum() { return {Kind::TrawlSum}; }
  static Predictor empirical_acf() { return {Kind::EmpiricalAcf}; }
  static Predictor naive() { return {Kind::Naive}; }
  /// Requires H > 1, alpha > 0, c > 0, theta in (0,1).
  static Predictor parametric(double alpha, double H, double c, double theta);

  [[nodiscard]] std::string name() const;
};

/// Parses "trawl", "acf", "naive" (the parametric predictor needs parameters).
[[nodiscard]] Predictor predictor_from_string(std::string_view s);

struct Prediction {
  double value = 0.0;
  bool fell_back = false;  ///< estimated Leb(A) <= 0, naive forecast used
};

/// w X_t + (1 - w) mean with w clamped to [0,1].
[[nodiscard]] double affine_forecast(double w, double x_t, double mean);

/// Forecast h_steps ahead from the last observation of `window`.
[[nodiscard]] Prediction predict(const TimeSeries& window, const Predictor& predictor,
                                 std::size_t h_steps);

/// Forecast coefficients for horizons 1..h_max: prediction = weight[h-1] X_t + offset[h-1].
struct ForecastFit {
  std::vector<double> weight;
  std::vector<double> offset;
  bool fell_back = false;
};

[[nodiscard]] ForecastFit fit_predictor(std::span<const double> window, double delta,
                                        const Predictor& predictor, std::size_t h_max);

struct DmResult {
  double statistic = 0.0;
  double p_value = 0.5;        ///< Phi(statistic): small when a beats b
  bool deterministic = false;  ///< constant non-zero loss differential
};

/// Diebold-Mariano test of equal accuracy against "a beats b". Losses must
/// already be raised to `power`. Rectangular HAC with h-1 lags.
[[nodiscard]] DmResult dm_test(std::span<const double> loss_a, std::span<const double> loss_b,
                               std::size_t h, int power);

/// "***" p<=0.001, "**" p<=0.01, "*" p<=0.05, "+" p<=0.1, "" otherwise.
[[nodiscard]] std::string_view dm_stars(double p);

struct ForecastOptions {
  std::size_t stride = 1;          ///< re-estimate every `stride` origins
  std::size_t jobs = 1;
  std::vector<int> dm_powers = {1, 2};
  std::size_t reference = 0;       ///< predictor compared against all others in DM tests
};

struct ForecastRow {
  std::size_t h = 0;
  std::string predictor;
  double mse = 0.0;
  double mae = 0.0;
  double ratio_vs_naive_mse = 0.0;  ///< NaN without a naive predictor
  double ratio_vs_naive_mae = 0.0;
  int dm_power = 0;                 ///< 0 for rows without a DM comparison
  double dm_stat = 0.0;             ///< reference vs this predictor; NaN when undefined
  double dm_p = 0.0;
};

struct ForecastReport {
  std::size_t window = 0;
  std::size_t h_max = 0;
  std::size_t count = 0;  ///< forecast origins
  std::vector<std::string> predictors;
  std::vector<ForecastRow> rows;
  /// errors[p][h-1][origin] = actual - forecast
  std::vector<std::vector<std::vector<double>>> errors;
  std::size_t fallbacks = 0;
};

/// Rolling-window forecasts from origins t = window-1 .. n-2-h_max, giving
/// n - window - h_max origins.
[[nodiscard]] ForecastReport rolling_forecast(const TimeSeries& series, std::size_t window,
                                              std::size_t h_max,
                                              const std::vector<Predictor>& predictors,
                                              const ForecastOptions& opts = {});

}  // namespace trawlkit
