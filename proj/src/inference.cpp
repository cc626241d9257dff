#include "trawlkit/inference.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "trawlkit/errors.hpp"
#include "trawlkit/estimator.hpp"
#include "trawlkit/normal.hpp"

namespace trawlkit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool uses_estimated_avar(StatKind k) {
  return k == StatKind::Feasible || k == StatKind::FeasibleBiasCorrected;
}

CoverageSummary summarize(const std::vector<double>& values, std::span<const double> levels,
                          std::span<const double> z) {
  CoverageSummary s;
  s.count = values.size();
  s.coverage.assign(levels.size(), kNaN);
  if (values.empty()) {
    s.mean = kNaN;
    s.sd = kNaN;
    return s;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  } else {
    s.sd = kNaN;
  }
  for (std::size_t j = 0; j < levels.size(); ++j) {
    std::size_t inside = 0;
    for (double v : values) {
      if (std::abs(v) <= z[j]) ++inside;
    }
    s.coverage[j] = static_cast<double>(inside) / static_cast<double>(values.size());
  }
  return s;
}

}  // namespace

std::string_view to_string(StatKind k) {
  switch (k) {
    case StatKind::Infeasible:
      return "infeasible";
    case StatKind::Feasible:
      return "feasible";
    case StatKind::FeasibleBiasCorrected:
      return "feasible_bc";
    case StatKind::FeasibleT0:
      return "feasible_t0";
    case StatKind::FeasibleT0Gaussian:
      return "feasible_t0_gaussian";
  }
  return "unknown";
}

StatKind stat_kind_from_string(std::string_view s) {
  for (StatKind k : {StatKind::Infeasible, StatKind::Feasible, StatKind::FeasibleBiasCorrected,
                     StatKind::FeasibleT0, StatKind::FeasibleT0Gaussian}) {
    if (s == to_string(k)) return k;
  }
  throw ConfigError("unknown statistic kind '" + std::string(s) + "'");
}

double closed_form_sigma2(const TrawlSpec& trawl, double c4, double t) {
  if (!(t >= 0.0)) {
    throw DomainError("t must be non-negative");
  }
  if (const auto* e = std::get_if<TrawlSpec::Exponential>(&trawl.kind())) {
    const double l = e->lambda;
    const double e2 = std::exp(-2.0 * l * t);
    return c4 * std::exp(-l * t) + 2.0 * (1.0 / (2.0 * l) + t * e2 - e2 / (2.0 * l));
  }
  auto a = [&](double s) { return eval_trawl(trawl, s); };
  double inner = 0.0;
  if (t > 0.0) {
    inner = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double s) { return a(t - s) * a(t + s); }, 0.0, t, 15, 1e-12);
  }
  // int_t^inf a(s-t) a(s+t) ds with u = s - t
  boost::math::quadrature::exp_sinh<double> half_line;
  const double outer =
      t > 0.0 ? half_line.integrate([&](double u) { return a(u) * a(u + 2.0 * t); }, 1e-12)
              : trawl_square_integral(trawl);
  return c4 * a(t) + 2.0 * (trawl_square_integral(trawl) + inner - outer);
}

std::vector<CltStatistic> statistics(const TimeSeries& series, std::span<const double> times,
                                     const TrueModel& truth, std::span<const StatKind> kinds,
                                     const StatisticOptions& opts) {
  const std::size_t n = series.size();
  const double delta = series.delta;
  if (n < 4) {
    throw InsufficientDataError("insufficient data: statistics need at least 4 observations");
  }
  std::vector<std::size_t> index(times.size());
  std::size_t max_i = 0;
  bool need_avar = false;
  for (std::size_t j = 0; j < times.size(); ++j) {
    index[j] = grid_index(times[j], delta);
    max_i = std::max(max_i, index[j]);
    for (StatKind k : kinds) {
      if ((k == StatKind::FeasibleT0 || k == StatKind::FeasibleT0Gaussian) && index[j] != 0) {
        throw DomainError(std::string(to_string(k)) + " is only defined at t = 0");
      }
      if (uses_estimated_avar(k) && index[j] > 0 && !opts.sigma2_override) need_avar = true;
    }
  }
  for (StatKind k : kinds) {
    if (k == StatKind::FeasibleT0Gaussian && truth.c4 != 0.0) {
      throw DomainError("the sqrt(3) scaling applies to Gaussian seeds (c4 = 0) only");
    }
  }
  if (max_i + 3 > n) {
    throw InsufficientDataError("t lies beyond the estimation grid of the series");
  }
  const std::size_t N = opts.N_n.value_or(n - 2);
  if (need_avar && N + 2 > n) {
    throw DomainError("N_n must not exceed n - 2");
  }
  const std::size_t grid = need_avar ? std::max(N, max_i) : max_i;
  const AcfTable acf = sample_acf(series, grid + 1);
  const std::vector<double> a_hat = estimate_trawl(series, acf, grid);
  const double q_n = quarticity(series);
  const double root_n_delta = std::sqrt(static_cast<double>(n) * delta);

  std::vector<CltStatistic> out;
  out.reserve(times.size() * kinds.size());
  for (std::size_t j = 0; j < times.size(); ++j) {
    const double t = times[j];
    const std::size_t i = index[j];
    const double center =
        eval_trawl(truth.trawl, opts.grid_centering ? static_cast<double>(i) * delta : t);
    std::optional<double> deriv;
    auto derivative = [&] {
      if (!deriv) deriv = estimate_derivative_at(series, i);
      return *deriv;
    };
    std::optional<AvarEstimate> avar;
    bool avar_failed = false;
    auto estimated_variance = [&]() -> double {
      if (opts.sigma2_override) return *opts.sigma2_override;
      if (i == 0) return q_n;
      if (!avar && !avar_failed) {
        try {
          avar = estimate_avar(a_hat, q_n, delta, N, static_cast<double>(i) * delta);
        } catch (const DegenerateEstimateError&) {
          avar_failed = true;
        }
      }
      return avar ? avar->value : 0.0;
    };

    for (StatKind k : kinds) {
      CltStatistic s;
      s.kind = k;
      s.t = t;
      double num = a_hat[i] - center;
      double var = 0.0;
      double factor = 1.0;
      switch (k) {
        case StatKind::Infeasible:
          var = closed_form_sigma2(truth.trawl, truth.c4, t);
          break;
        case StatKind::Feasible:
          var = estimated_variance();
          break;
        case StatKind::FeasibleBiasCorrected:
          var = estimated_variance();
          num -= 0.5 * delta * derivative();
          break;
        case StatKind::FeasibleT0:
          var = q_n;
          num -= 0.5 * delta * derivative();
          break;
        case StatKind::FeasibleT0Gaussian: {
          const std::size_t K = opts.K_n.value_or(default_subsample_stride(n));
          var = q_n;
          num -= 0.5 * delta * estimate_derivative_subsampled(series, K, 0.0);
          factor = std::sqrt(3.0);
          break;
        }
      }
      if (opts.sigma2_override) {
        var = *opts.sigma2_override;
      } else if (uses_estimated_avar(k) && i > 0 && avar && avar->degenerate) {
        s.degenerate = true;
      }
      if (!(var > 0.0) || !std::isfinite(var)) {
        s.degenerate = true;
        s.value = kNaN;
      } else {
        s.value = factor * root_n_delta * num / std::sqrt(var);
      }
      out.push_back(s);
    }
  }
  return out;
}

CltStatistic statistic(const TimeSeries& series, double t, const std::optional<TrueModel>& truth,
                       StatKind kind, const StatisticOptions& opts) {
  if (!truth) {
    throw DomainError("statistic requires the true trawl function for centering");
  }
  const double times[] = {t};
  const StatKind kinds[] = {kind};
  return statistics(series, times, *truth, kinds, opts).front();
}

CoverageReport coverage(std::span<const CltStatistic> stats, std::span<const double> levels) {
  if (stats.empty()) {
    throw InsufficientDataError("coverage of an empty set of statistics");
  }
  std::vector<double> z(levels.size());
  for (std::size_t j = 0; j < levels.size(); ++j) {
    if (!(levels[j] > 0.0 && levels[j] < 1.0)) {
      throw DomainError("coverage levels must lie in (0,1)");
    }
    z[j] = normal_quantile(0.5 * (1.0 + levels[j]));
  }
  std::vector<double> clean;
  std::vector<double> finite;
  CoverageReport report;
  report.levels.assign(levels.begin(), levels.end());
  for (const auto& s : stats) {
    if (s.degenerate) {
      ++report.degenerate;
    } else {
      clean.push_back(s.value);
    }
    if (std::isfinite(s.value)) finite.push_back(s.value);
  }
  if (clean.size() < 2) {
    throw InsufficientDataError("coverage needs at least 2 non-degenerate statistics, got " +
                                std::to_string(clean.size()));
  }
  report.non_degenerate = summarize(clean, levels, z);
  report.all_runs = summarize(finite, levels, z);
  return report;
}

}  // namespace trawlkit
