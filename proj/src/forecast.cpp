#include "trawlkit/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "trawlkit/errors.hpp"
#include "trawlkit/estimator.hpp"
#include "trawlkit/normal.hpp"
#include "trawlkit/parallel.hpp"

namespace trawlkit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double autocov(std::span<const double> x, double mean, std::size_t lag) {
  return sample_autocovariance(x, mean, lag);
}

}  // namespace

Predictor Predictor::parametric(double alpha, double H, double c, double theta) {
  if (!(alpha > 0.0) || !(H > 1.0) || !(c > 0.0) || !(theta > 0.0 && theta < 1.0)) {
    throw DomainError("parametric predictor requires alpha > 0, H > 1, c > 0, theta in (0,1)");
  }
  Predictor p;
  p.kind = Kind::ParametricSupGammaNB;
  p.alpha = alpha;
  p.H = H;
  p.c = c;
  p.theta = theta;
  return p;
}

std::string Predictor::name() const {
  switch (kind) {
    case Kind::TrawlSum:
      return "trawl";
    case Kind::EmpiricalAcf:
      return "acf";
    case Kind::Naive:
      return "naive";
    case Kind::ParametricSupGammaNB:
      return "parametric";
  }
  return "unknown";
}

Predictor predictor_from_string(std::string_view s) {
  if (s == "trawl") return Predictor::trawl_sum();
  if (s == "acf") return Predictor::empirical_acf();
  if (s == "naive") return Predictor::naive();
  throw ConfigError("unknown predictor '" + std::string(s) + "'");
}

double affine_forecast(double w, double x_t, double mean) {
  w = std::clamp(w, 0.0, 1.0);
  return w * x_t + (1.0 - w) * mean;
}

ForecastFit fit_predictor(std::span<const double> window, double delta, const Predictor& predictor,
                          std::size_t h_max) {
  if (window.size() < 3) {
    throw InsufficientDataError("insufficient data: forecasting needs a window of at least 3");
  }
  if (h_max == 0) {
    throw DomainError("forecast horizon must be at least 1 step");
  }
  ForecastFit fit;
  fit.weight.assign(h_max, 1.0);
  fit.offset.assign(h_max, 0.0);
  switch (predictor.kind) {
    case Predictor::Kind::Naive:
      return fit;
    case Predictor::Kind::ParametricSupGammaNB: {
      const double leb = predictor.c * predictor.alpha / (predictor.H - 1.0);
      for (std::size_t h = 1; h <= h_max; ++h) {
        const double w =
            std::pow(1.0 + static_cast<double>(h) * delta / predictor.alpha, 1.0 - predictor.H);
        fit.weight[h - 1] = w;
        fit.offset[h - 1] = leb * (1.0 - w) * (1.0 - predictor.theta);
      }
      return fit;
    }
    case Predictor::Kind::TrawlSum:
    case Predictor::Kind::EmpiricalAcf:
      break;
  }
  const std::size_t n = window.size();
  const double mean = std::accumulate(window.begin(), window.end(), 0.0) / static_cast<double>(n);
  double leb_A = 0.0;
  if (predictor.kind == Predictor::Kind::EmpiricalAcf) {
    leb_A = autocov(window, mean, 0);
  } else {
    double rv = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double d = window[k + 1] - window[k];
      rv += d * d;
    }
    // a_hat(0) delta + gamma_1
    leb_A = rv / (2.0 * static_cast<double>(n)) + autocov(window, mean, 1);
  }
  if (!(leb_A > 0.0)) {
    fit.fell_back = true;
    return fit;
  }
  for (std::size_t h = 1; h <= h_max; ++h) {
    const double cap = std::clamp(autocov(window, mean, h), 0.0, leb_A);
    const double w = cap / leb_A;
    fit.weight[h - 1] = w;
    fit.offset[h - 1] = (1.0 - w) * mean;
  }
  return fit;
}

Prediction predict(const TimeSeries& window, const Predictor& predictor, std::size_t h_steps) {
  if (h_steps == 0) {
    throw DomainError("forecast horizon must be at least 1 step");
  }
  const ForecastFit fit = fit_predictor(window.view(), window.delta, predictor, h_steps);
  const double x_t = window.values.back();
  return {fit.weight[h_steps - 1] * x_t + fit.offset[h_steps - 1], fit.fell_back};
}

DmResult dm_test(std::span<const double> loss_a, std::span<const double> loss_b, std::size_t h,
                 int power) {
  if (power != 1 && power != 2) {
    throw DomainError("DM loss power must be 1 or 2");
  }
  if (loss_a.size() != loss_b.size()) {
    throw DomainError("DM test needs loss series of equal length");
  }
  if (h == 0) {
    throw DomainError("DM horizon must be at least 1");
  }
  const std::size_t T = loss_a.size();
  if (T < 10) {
    throw InsufficientDataError("insufficient data: DM test needs at least 10 losses");
  }
  std::vector<double> d(T);
  for (std::size_t t = 0; t < T; ++t) d[t] = loss_a[t] - loss_b[t];
  const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(T);
  DmResult r;
  if (*lo == *hi) {
    if (mean == 0.0) return r;
    r.deterministic = true;
    r.statistic = mean < 0 ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
    r.p_value = mean < 0 ? 0.0 : 1.0;
    return r;
  }
  double lrv = 0.0;
  for (std::size_t k = 0; k < h && k < T; ++k) {
    double g = 0.0;
    for (std::size_t t = k; t < T; ++t) g += (d[t] - mean) * (d[t - k] - mean);
    g /= static_cast<double>(T);
    lrv += k == 0 ? g : 2.0 * g;
  }
  if (!(lrv > 0.0)) {
    throw DegenerateEstimateError("DM long-run variance is not positive");
  }
  r.statistic = mean / std::sqrt(lrv / static_cast<double>(T));
  r.p_value = normal_cdf(r.statistic);
  return r;
}

std::string_view dm_stars(double p) {
  if (!(p <= 0.1)) return "";
  if (p <= 0.001) return "***";
  if (p <= 0.01) return "**";
  if (p <= 0.05) return "*";
  return "+";
}

ForecastReport rolling_forecast(const TimeSeries& series, std::size_t window, std::size_t h_max,
                                const std::vector<Predictor>& predictors,
                                const ForecastOptions& opts) {
  const std::size_t n = series.size();
  if (predictors.empty()) {
    throw ConfigError("at least one predictor is required");
  }
  if (window < 3 || h_max == 0) {
    throw DomainError("window must be at least 3 and h_max at least 1");
  }
  if (n < window + h_max + 1) {
    throw InsufficientDataError("insufficient data: rolling forecasts need at least window + h_max + 1 = " +
                                std::to_string(window + h_max + 1) + " observations, got " +
                                std::to_string(n));
  }
  if (opts.stride == 0) {
    throw DomainError("stride must be positive");
  }
  if (opts.reference >= predictors.size()) {
    throw ConfigError("reference predictor index out of range");
  }
  const std::size_t P = predictors.size();
  const std::size_t count = n - window - h_max;
  const std::size_t first = window - 1;
  const auto& x = series.values;

  ForecastReport report;
  report.window = window;
  report.h_max = h_max;
  report.count = count;
  for (const auto& p : predictors) report.predictors.push_back(p.name());
  report.errors.assign(P, std::vector<std::vector<double>>(h_max, std::vector<double>(count)));

  // one refresh block per `stride` origins
  const std::size_t blocks = (count + opts.stride - 1) / opts.stride;
  std::vector<std::size_t> block_fallbacks(blocks, 0);
  parallel_for(blocks, opts.jobs, [&](std::size_t b) {
    const std::size_t o0 = b * opts.stride;
    const std::size_t o1 = std::min(count, o0 + opts.stride);
    const std::size_t t0 = first + o0;
    std::span<const double> win(x.data() + (t0 + 1 - window), window);
    for (std::size_t p = 0; p < P; ++p) {
      const ForecastFit fit = fit_predictor(win, series.delta, predictors[p], h_max);
      if (fit.fell_back) ++block_fallbacks[b];
      for (std::size_t o = o0; o < o1; ++o) {
        const std::size_t t = first + o;
        for (std::size_t h = 1; h <= h_max; ++h) {
          const double f = fit.weight[h - 1] * x[t] + fit.offset[h - 1];
          report.errors[p][h - 1][o] = x[t + h] - f;
        }
      }
    }
  });
  report.fallbacks = std::accumulate(block_fallbacks.begin(), block_fallbacks.end(), std::size_t{0});

  std::size_t naive = P;
  for (std::size_t p = 0; p < P; ++p) {
    if (predictors[p].kind == Predictor::Kind::Naive) {
      naive = p;
      break;
    }
  }
  std::vector<double> mse(P), mae(P);
  std::vector<double> la(count), lb(count);
  for (std::size_t h = 1; h <= h_max; ++h) {
    for (std::size_t p = 0; p < P; ++p) {
      double s2 = 0.0, s1 = 0.0;
      for (double e : report.errors[p][h - 1]) {
        s2 += e * e;
        s1 += std::abs(e);
      }
      mse[p] = s2 / static_cast<double>(count);
      mae[p] = s1 / static_cast<double>(count);
    }
    for (std::size_t p = 0; p < P; ++p) {
      ForecastRow row;
      row.h = h;
      row.predictor = report.predictors[p];
      row.mse = mse[p];
      row.mae = mae[p];
      row.ratio_vs_naive_mse = naive < P ? mse[p] / mse[naive] : kNaN;
      row.ratio_vs_naive_mae = naive < P ? mae[p] / mae[naive] : kNaN;
      if (p == opts.reference || opts.dm_powers.empty()) {
        row.dm_stat = kNaN;
        row.dm_p = kNaN;
        report.rows.push_back(row);
        continue;
      }
      for (int power : opts.dm_powers) {
        for (std::size_t o = 0; o < count; ++o) {
          la[o] = std::pow(std::abs(report.errors[opts.reference][h - 1][o]), power);
          lb[o] = std::pow(std::abs(report.errors[p][h - 1][o]), power);
        }
        ForecastRow r = row;
        r.dm_power = power;
        try {
          const DmResult dm = dm_test(la, lb, h, power);
          r.dm_stat = dm.statistic;
          r.dm_p = dm.p_value;
        } catch (const Error&) {
          r.dm_stat = kNaN;
          r.dm_p = kNaN;
        }
        report.rows.push_back(r);
      }
    }
  }
  return report;
}

}  // namespace trawlkit
