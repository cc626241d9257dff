#include "trawlkit/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "trawlkit/errors.hpp"
#include "trawlkit/normal.hpp"

namespace trawlkit {

namespace {

std::vector<double> increments(std::span<const double> x) {
  std::vector<double> d(x.size() - 1);
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    d[k] = x[k + 1] - x[k];
  }
  return d;
}

double mean_of(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// (1/(len delta^2)) sum_{k=l+1}^{m-1} d_k d_{k-l-1}, d of size m
double lagged_increment_product(const std::vector<double>& d, std::size_t l, double len,
                                double delta) {
  double s = 0.0;
  for (std::size_t k = l + 1; k < d.size(); ++k) {
    s += d[k] * d[k - l - 1];
  }
  return s / (len * delta * delta);
}

// smallest l with l delta >= h
std::size_t ceil_index(double h, double delta) {
  const double r = h / delta;
  const double nearest = std::round(r);
  if (std::abs(r - nearest) <= 1e-9 * std::max(1.0, std::abs(r))) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::ceil(r));
}

}  // namespace

double sample_autocovariance(std::span<const double> x, double mean, std::size_t lag) {
  const std::size_t n = x.size();
  if (lag >= n) {
    return 0.0;
  }
  double s = 0.0;
  for (std::size_t k = 0; k + lag < n; ++k) {
    s += (x[k + lag] - mean) * (x[k] - mean);
  }
  return s / static_cast<double>(n);
}

AcfTable sample_acf(const TimeSeries& series, std::size_t max_lag) {
  if (max_lag >= series.size()) {
    throw InsufficientDataError("max_lag " + std::to_string(max_lag) +
                                " must be below the series length " +
                                std::to_string(series.size()));
  }
  AcfTable table;
  table.delta = series.delta;
  table.mean = mean_of(series.view());
  table.gamma_hat.resize(max_lag + 1);
  for (std::size_t l = 0; l <= max_lag; ++l) {
    table.gamma_hat[l] = sample_autocovariance(series.view(), table.mean, l);
  }
  return table;
}

AcfTable sample_acf(const TimeSeries& series) { return sample_acf(series, series.size() - 1); }

std::size_t grid_index(double t, double delta) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw DomainError("time point must be non-negative and finite");
  }
  if (!(delta > 0.0)) {
    throw DomainError("grid width must be positive");
  }
  const double r = t / delta;
  const double nearest = std::round(r);
  if (std::abs(r - nearest) <= 1e-9 * std::max(1.0, r)) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::floor(r));
}

double estimate_a0(const TimeSeries& series) {
  const auto x = series.view();
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    const double d = x[k + 1] - x[k];
    s += d * d;
  }
  return s / (2.0 * series.delta * static_cast<double>(x.size()));
}

std::vector<double> estimate_trawl(const TimeSeries& series, const AcfTable& acf, std::size_t L) {
  const std::size_t n = series.size();
  if (n < 3 || L + 2 > n) {
    throw InsufficientDataError("estimation grid length L = " + std::to_string(L) +
                                " requires L <= n - 2 with n = " + std::to_string(n));
  }
  if (acf.gamma_hat.size() < L + 2) {
    throw InsufficientDataError("autocovariance table does not cover lag L + 1");
  }
  std::vector<double> a(L + 1);
  a[0] = estimate_a0(series);
  for (std::size_t l = 1; l <= L; ++l) {
    a[l] = -(acf.gamma_hat[l + 1] - acf.gamma_hat[l]) / series.delta;
  }
  return a;
}

std::vector<double> estimate_trawl(const TimeSeries& series, std::size_t L) {
  if (L + 2 > series.size()) {
    throw InsufficientDataError("estimation grid length L = " + std::to_string(L) +
                                " requires L <= n - 2 with n = " + std::to_string(series.size()));
  }
  return estimate_trawl(series, sample_acf(series, L + 1), L);
}

double estimate_derivative_at(const TimeSeries& series, std::size_t l) {
  const std::size_t n = series.size();
  if (n < 3 || l + 3 > n) {
    throw InsufficientDataError("derivative at index " + std::to_string(l) +
                                " requires l <= n - 3 with n = " + std::to_string(n));
  }
  const auto d = increments(series.view());
  return lagged_increment_product(d, l, static_cast<double>(n), series.delta);
}

std::vector<double> estimate_derivative(const TimeSeries& series, std::size_t L) {
  const std::size_t n = series.size();
  if (n < 3 || L + 3 > n) {
    throw InsufficientDataError("derivative grid length L = " + std::to_string(L) +
                                " requires L <= n - 3 with n = " + std::to_string(n));
  }
  const auto d = increments(series.view());
  std::vector<double> out(L + 1);
  for (std::size_t l = 0; l <= L; ++l) {
    out[l] = lagged_increment_product(d, l, static_cast<double>(n), series.delta);
  }
  return out;
}

std::size_t default_subsample_stride(std::size_t n) {
  auto k = static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(n)) - 1e-12));
  return std::max<std::size_t>(k, 1);
}

double estimate_derivative_subsampled(const TimeSeries& series, std::size_t K, double t) {
  if (K == 0) {
    throw DomainError("subsampling stride must be positive");
  }
  const std::size_t n = series.size();
  const std::size_t M = (n - 1) / K;
  if (M < 3) {
    throw InsufficientDataError("subsampled series has fewer than 4 points (M = " +
                                std::to_string(M) + ")");
  }
  const double coarse = static_cast<double>(K) * series.delta;
  const std::size_t l = grid_index(t, coarse);
  if (l + 2 > M) {
    throw InsufficientDataError("t = " + std::to_string(t) +
                                " lies beyond the subsampled grid");
  }
  std::vector<double> d(M);
  for (std::size_t i = 0; i < M; ++i) {
    d[i] = series.values[(i + 1) * K] - series.values[i * K];
  }
  return lagged_increment_product(d, l, static_cast<double>(M + 1), coarse);
}

double quarticity(const TimeSeries& series) {
  const auto x = series.view();
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    const double d = x[k + 1] - x[k];
    const double d2 = d * d;
    s += d2 * d2;
  }
  return s / (2.0 * series.delta * static_cast<double>(x.size()));
}

AvarEstimate estimate_avar(std::span<const double> a_hat, double q_n, double delta,
                           std::size_t N_n, double t) {
  if (a_hat.empty()) {
    throw InsufficientDataError("empty trawl estimate grid");
  }
  const std::size_t L = a_hat.size() - 1;
  if (N_n > L) {
    throw DomainError("N_n = " + std::to_string(N_n) + " exceeds the grid length " +
                      std::to_string(L));
  }
  if (!(a_hat[0] > 0.0)) {
    throw DegenerateEstimateError("a_hat(0) is not positive; asymptotic variance undefined");
  }
  const std::size_t i = grid_index(t, delta);
  if (i > L) {
    throw DomainError("t lies beyond the estimation grid");
  }
  AvarEstimate est;
  est.v1 = q_n / a_hat[0] * a_hat[i];
  double s2 = 0.0;
  for (std::size_t l = 0; l <= N_n; ++l) {
    s2 += a_hat[l] * a_hat[l];
  }
  est.v2 = 2.0 * s2 * delta;
  double s3 = 0.0;
  for (std::size_t l = 0; l <= std::min(i, L - i); ++l) {
    s3 += a_hat[i - l] * a_hat[i + l];
  }
  est.v3 = 2.0 * s3 * delta;
  double s4 = 0.0;
  if (N_n >= 2 * i) {
    for (std::size_t l = i; l <= N_n - i; ++l) {
      s4 += a_hat[l - i] * a_hat[i + l];
    }
  }
  est.v4 = -2.0 * s4 * delta;
  const double total = est.v1 + est.v2 + est.v3 + est.v4;
  if (total > 0.0 && std::isfinite(total)) {
    est.value = total;
  } else {
    est.value = kAvarFloor;
    est.degenerate = true;
  }
  return est;
}

Interval confidence_interval(double a_hat_t, double sigma2_t, std::size_t n, double delta,
                             double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw DomainError("beta must lie in (0,1)");
  }
  if (!(sigma2_t > 0.0) || n == 0 || !(delta > 0.0)) {
    throw DomainError("confidence interval needs positive variance, n and delta");
  }
  const double z = normal_quantile(1.0 - beta / 2.0);
  const double half = z * std::sqrt(sigma2_t / (static_cast<double>(n) * delta));
  return {a_hat_t - half, a_hat_t + half};
}

std::string_view to_string(SliceMethod m) {
  switch (m) {
    case SliceMethod::TrawlSum:
      return "trawl_sum";
    case SliceMethod::TrawlSumBC:
      return "trawl_sum_bc";
    case SliceMethod::EmpiricalAcf:
      return "empirical_acf";
  }
  return "unknown";
}

SliceMethod slice_method_from_string(std::string_view s) {
  if (s == "trawl_sum" || s == "trawl") return SliceMethod::TrawlSum;
  if (s == "trawl_sum_bc" || s == "trawl_bc") return SliceMethod::TrawlSumBC;
  if (s == "empirical_acf" || s == "acf") return SliceMethod::EmpiricalAcf;
  throw ConfigError("unknown slice method '" + std::string(s) + "'");
}

SliceEstimate estimate_slices(const TimeSeries& series, double h, SliceMethod method) {
  if (!(h >= 0.0) || !std::isfinite(h)) {
    throw DomainError("slice horizon h must be non-negative");
  }
  const std::size_t n = series.size();
  if (n < 3) {
    throw InsufficientDataError("slice estimation needs at least 3 observations");
  }
  const double delta = series.delta;
  const auto x = series.view();
  const double mean = mean_of(x);
  SliceEstimate est;
  est.method = method;
  est.h = h;

  if (method == SliceMethod::EmpiricalAcf) {
    est.leb_A = sample_autocovariance(x, mean, 0);
    est.raw_cap = sample_autocovariance(x, mean, grid_index(h, delta));
  } else {
    // sum_{l>=1} a_hat(l) delta telescopes to gamma_1 since gamma_n = 0
    est.leb_A = estimate_a0(series) * delta + sample_autocovariance(x, mean, 1);
    const std::size_t lh = ceil_index(h, delta);
    est.raw_cap = lh == 0 ? est.leb_A : sample_autocovariance(x, mean, lh);
    if (method == SliceMethod::TrawlSumBC) {
      // sum_{l>=l0} sum_k d_k d_{k-l-1} = sum_{k=l0+1}^{n-2} d_k (x_{k-l0} - x_0)
      auto tail = [&](std::size_t l0) {
        double s = 0.0;
        for (std::size_t k = l0 + 1; k + 1 < n; ++k) {
          s += (x[k + 1] - x[k]) * (x[k - l0] - x[0]);
        }
        return s / (2.0 * static_cast<double>(n));
      };
      est.leb_A -= tail(0);
      est.raw_cap -= tail(lh);
    }
  }
  if (!(est.leb_A > 0.0)) {
    throw DegenerateEstimateError("estimated Leb(A) is not positive");
  }
  est.leb_cap = std::clamp(est.raw_cap, 0.0, est.leb_A);
  est.leb_minus = est.leb_A - est.leb_cap;
  est.ratio_cap = est.leb_cap / est.leb_A;
  est.ratio_minus = est.leb_minus / est.leb_A;
  return est;
}

TrawlEstimate estimate_all(const TimeSeries& series, const EstimateOptions& opts) {
  const std::size_t n = series.size();
  const std::size_t L = opts.max_lag;
  if (n < 4 || L + 3 > n) {
    throw InsufficientDataError("max_lag = " + std::to_string(L) +
                                " requires at least max_lag + 3 observations, got " +
                                std::to_string(n));
  }
  TrawlEstimate est;
  est.delta = series.delta;
  est.n = n;
  est.N_n = opts.N_n.value_or(n - 2);
  est.K_n = opts.K_n.value_or(default_subsample_stride(n));
  if (est.N_n + 2 > n) {
    throw DomainError("N_n must not exceed n - 2");
  }
  const std::size_t grid = opts.with_avar ? std::max(L, est.N_n) : L;
  const AcfTable acf = sample_acf(series, grid + 1);
  const std::vector<double> full = estimate_trawl(series, acf, grid);
  est.a_hat.assign(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(L + 1));
  est.a_hat_prime = estimate_derivative(series, L);
  est.a_hat_bc.resize(L + 1);
  for (std::size_t l = 0; l <= L; ++l) {
    est.a_hat_bc[l] = est.a_hat[l] - 0.5 * series.delta * est.a_hat_prime[l];
  }
  est.q_n = quarticity(series);
  est.degenerate.assign(L + 1, false);
  if (opts.with_avar) {
    est.sigma2_hat.resize(L + 1);
    est.sigma2_hat[0] = est.q_n;
    for (std::size_t l = 1; l <= L; ++l) {
      const AvarEstimate av =
          estimate_avar(full, est.q_n, series.delta, est.N_n, static_cast<double>(l) * series.delta);
      est.sigma2_hat[l] = av.value;
      est.degenerate[l] = av.degenerate;
    }
    if (!(est.q_n > 0.0)) {
      est.sigma2_hat[0] = kAvarFloor;
      est.degenerate[0] = true;
    }
  }
  return est;
}

}  // namespace trawlkit
