#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "trawlkit/time_series.hpp"

namespace trawlkit {

/// Sample autocovariances with divisor n:
///   gamma_hat[l] = (1/n) sum_{k=0}^{n-1-l} (x_{k+l} - mean)(x_k - mean).
struct AcfTable {
  double delta = 0.0;
  double mean = 0.0;
  std::vector<double> gamma_hat;
};

/// All lags 0..n-1.
[[nodiscard]] AcfTable sample_acf(const TimeSeries& series);
/// Lags 0..max_lag (max_lag <= n-1).
[[nodiscard]] AcfTable sample_acf(const TimeSeries& series, std::size_t max_lag);
/// One lag; lags >= n give 0.
[[nodiscard]] double sample_autocovariance(std::span<const double> x, double mean, std::size_t lag);

/// Grid index l with l delta <= t < (l+1) delta; exact multiples (up to
/// rounding) map to themselves.
[[nodiscard]] std::size_t grid_index(double t, double delta);

/// Realised-variance estimate of a(0): (1/(2 delta n)) sum (x_{k+1} - x_k)^2.
[[nodiscard]] double estimate_a0(const TimeSeries& series);

/// a_hat(l delta) for l = 0..L (L <= n-2). Index 0 uses the realised variance,
/// l >= 1 the difference quotient -(gamma_{l+1} - gamma_l) / delta.
[[nodiscard]] std::vector<double> estimate_trawl(const TimeSeries& series, std::size_t L);
/// Same, reusing an autocovariance table that covers lags 0..L+1.
[[nodiscard]] std::vector<double> estimate_trawl(const TimeSeries& series, const AcfTable& acf,
                                                 std::size_t L);

/// Derivative estimate at grid index l:
///   (1/(n delta^2)) sum_{k=l+1}^{n-2} dx_k dx_{k-l-1}.
[[nodiscard]] double estimate_derivative_at(const TimeSeries& series, std::size_t l);
/// Derivative grid for l = 0..L (L <= n-3).
[[nodiscard]] std::vector<double> estimate_derivative(const TimeSeries& series, std::size_t L);

/// Default subsampling stride ceil(n^(1/3)).
[[nodiscard]] std::size_t default_subsample_stride(std::size_t n);

/// Derivative estimate on the subsample (x_{i K delta})_{i=0..M}, M = floor((n-1)/K),
/// evaluated at t.
[[nodiscard]] double estimate_derivative_subsampled(const TimeSeries& series, std::size_t K,
                                                    double t);

/// Quarticity Q_n = (1/(2 delta n)) sum (x_{k+1} - x_k)^4.
[[nodiscard]] double quarticity(const TimeSeries& series);

/// Lower bound used when the asymptotic variance estimate is not positive.
inline constexpr double kAvarFloor = 1e-10;

struct AvarEstimate {
  double value = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
  double v3 = 0.0;
  double v4 = 0.0;
  bool degenerate = false;  ///< v1+v2+v3+v4 <= 0 and value was clamped
};

/// Plug-in asymptotic variance estimate at t (step-function integrals).
/// `a_hat` is the grid a_hat(l delta), l = 0..L; N_n <= L.
[[nodiscard]] AvarEstimate estimate_avar(std::span<const double> a_hat, double q_n, double delta,
                                         std::size_t N_n, double t);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// a_hat(t) -/+ z_{beta/2} sqrt(sigma2 / (n delta)).
[[nodiscard]] Interval confidence_interval(double a_hat_t, double sigma2_t, std::size_t n,
                                           double delta, double beta);

enum class SliceMethod { TrawlSum, TrawlSumBC, EmpiricalAcf };

[[nodiscard]] std::string_view to_string(SliceMethod m);
[[nodiscard]] SliceMethod slice_method_from_string(std::string_view s);

struct SliceEstimate {
  SliceMethod method = SliceMethod::EmpiricalAcf;
  double h = 0.0;
  double leb_A = 0.0;
  double leb_cap = 0.0;    ///< clamped to [0, leb_A]
  double leb_minus = 0.0;  ///< leb_A - leb_cap
  double ratio_cap = 0.0;
  double ratio_minus = 0.0;
  double raw_cap = 0.0;    ///< value before clamping
};

/// Estimates Leb(A), Leb(A ∩ A_h), Leb(A \ A_h) and their ratios.
[[nodiscard]] SliceEstimate estimate_slices(const TimeSeries& series, double h, SliceMethod method);

/// Everything needed to report a(t) with confidence bounds on a grid.
struct TrawlEstimate {
  double delta = 0.0;
  std::size_t n = 0;
  std::vector<double> a_hat;        ///< l = 0..L
  std::vector<double> a_hat_prime;  ///< l = 0..L
  std::vector<double> a_hat_bc;     ///< a_hat - delta/2 a_hat_prime
  double q_n = 0.0;
  std::vector<double> sigma2_hat;   ///< empty unless requested; index 0 holds Q_n
  std::vector<bool> degenerate;     ///< per grid point, set when sigma2 was clamped
  std::size_t K_n = 0;
  std::size_t N_n = 0;
};

struct EstimateOptions {
  std::size_t max_lag = 30;
  std::optional<std::size_t> N_n;  ///< default: n - 2, the largest available grid index
  std::optional<std::size_t> K_n;  ///< default: ceil(n^(1/3))
  bool with_avar = true;
};

[[nodiscard]] TrawlEstimate estimate_all(const TimeSeries& series, const EstimateOptions& opts);

}  // namespace trawlkit
