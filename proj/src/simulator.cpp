#include "trawlkit/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <variant>

#include "trawlkit/errors.hpp"
#include "trawlkit/estimator.hpp"

namespace trawlkit {

namespace {

// Column count above which the ring buffers no longer fit a desk machine.
constexpr std::size_t kMaxColumns = 10'000'000;
// Hard limit on per-slice draws for seeds that need one draw per slice.
constexpr double kMaxSliceDraws = 2e10;
// Default truncation is shrunk to stay below this many per-slice draws.
constexpr double kDefaultSliceDraws = 3e8;

bool is_negbin(const SeedSpec& seed) {
  return std::holds_alternative<SeedSpec::NegBin>(seed.kind());
}

double slice_draws(std::size_t n, std::size_t J) {
  return static_cast<double>(n + J - 1) * static_cast<double>(J);
}

}  // namespace

double SliceTable::covered_area(std::size_t age) const {
  if (age >= areas.size()) {
    return 0.0;
  }
  return std::accumulate(areas.begin() + static_cast<std::ptrdiff_t>(age), areas.end(), 0.0);
}

double SliceTable::column_area() const {
  return std::accumulate(areas.begin(), areas.end(), 0.0) - remainder;
}

SliceTable slice_areas(const TrawlSpec& trawl, double delta, std::size_t J) {
  if (!(delta > 0.0)) {
    throw DomainError("grid width must be positive");
  }
  if (J == 0) {
    throw DomainError("at least one column is required");
  }
  SliceTable table;
  table.delta = delta;
  table.areas.resize(J);
  auto strip = [&](std::size_t k) {
    const double x = static_cast<double>(k) * delta;
    return trawl_integral(trawl, x, x + delta);
  };
  double current = strip(0);
  for (std::size_t k = 0; k + 1 < J; ++k) {
    const double next = strip(k + 1);
    table.areas[k] = std::max(current - next, 0.0);
    current = next;
  }
  table.tail_area = leb_intersection(trawl, static_cast<double>(J) * delta);
  table.remainder = table.tail_area / static_cast<double>(J);
  table.areas[J - 1] = current + table.remainder;
  return table;
}

std::size_t truncation_columns(const SimConfig& cfg) {
  if (!(cfg.delta > 0.0) || !std::isfinite(cfg.delta)) {
    throw ConfigError("delta must be positive");
  }
  if (cfg.n < 2) {
    throw ConfigError("n must be at least 2");
  }
  const double span = static_cast<double>(cfg.n) * cfg.delta;
  double t_max = 0.0;
  if (cfg.tail_cutoff) {
    if (!(*cfg.tail_cutoff > 0.0) || !std::isfinite(*cfg.tail_cutoff)) {
      throw ConfigError("tail_cutoff must be positive");
    }
    t_max = *cfg.tail_cutoff;
  } else {
    t_max = std::min(tail_time(cfg.trawl, kDefaultTailTolerance), 10.0 * span);
  }
  const double columns = std::max(1.0, std::ceil(t_max / cfg.delta - 1e-9));
  if (columns > static_cast<double>(kMaxColumns)) {
    if (cfg.tail_cutoff) {
      throw ConfigError("tail_cutoff / delta = " + std::to_string(columns) +
                        " columns exceeds the memory budget of " + std::to_string(kMaxColumns));
    }
  }
  auto J = static_cast<std::size_t>(std::min(columns, static_cast<double>(kMaxColumns)));
  if (is_negbin(cfg.seed)) {
    return J;
  }
  if (cfg.tail_cutoff) {
    if (slice_draws(cfg.n, J) > kMaxSliceDraws) {
      throw ConfigError("n * columns = " + std::to_string(slice_draws(cfg.n, J)) +
                        " slice draws exceeds the work budget");
    }
    return J;
  }
  if (slice_draws(cfg.n, J) > kDefaultSliceDraws) {
    // largest J with (n + J - 1) J <= budget
    const double b = static_cast<double>(cfg.n) - 1.0;
    const double root = 0.5 * (-b + std::sqrt(b * b + 4.0 * kDefaultSliceDraws));
    J = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(root)));
  }
  return J;
}

double draw_slice(const SeedSpec& seed, double area, Rng& rng) {
  if (area <= 0.0) {
    return 0.0;
  }
  if (const auto* nb = std::get_if<SeedSpec::NegBin>(&seed.kind())) {
    // compound Poisson: Poisson(-m area log(1-theta)) jumps of Logarithmic(theta) size
    const double rate = -nb->m * area * std::log1p(-nb->theta);
    const std::uint64_t jumps = draw_poisson(rng, rate);
    double total = 0.0;
    for (std::uint64_t i = 0; i < jumps; ++i) {
      total += static_cast<double>(draw_logarithmic(rng, nb->theta));
    }
    return total;
  }
  if (const auto* g = std::get_if<SeedSpec::Gamma>(&seed.kind())) {
    return draw_gamma(rng, g->shape * area, g->scale);
  }
  const auto& gs = std::get<SeedSpec::Gaussian>(seed.kind());
  return gs.mean * area + std::sqrt(gs.variance * area) * draw_standard_normal(rng);
}

TimeSeries simulate(const SimConfig& cfg) {
  const std::size_t J = truncation_columns(cfg);
  const SliceTable table = slice_areas(cfg.trawl, cfg.delta, J);
  Rng rng(cfg.rng_seed, cfg.stream);

  // expiring[tau mod (J+1)] holds the mass of slices that leave the trawl set
  // at shifted time tau; tau = j + J - 1 so that the first column is tau = 0.
  std::vector<double> expiring(J + 1, 0.0);
  std::vector<double> values(cfg.n);
  double live = 0.0;
  const std::size_t columns_total = cfg.n + J - 1;

  auto deposit = [&](std::size_t tau, std::size_t k, double z) {
    live += z;
    expiring[(tau + k + 1) % (J + 1)] += z;
  };

  const auto* nb = std::get_if<SeedSpec::NegBin>(&cfg.seed.kind());
  std::vector<double> cumulative;
  double column_rate = 0.0;
  if (nb != nullptr) {
    cumulative.resize(J);
    std::partial_sum(table.areas.begin(), table.areas.end(), cumulative.begin());
    column_rate = -nb->m * cumulative.back() * std::log1p(-nb->theta);
  }

  for (std::size_t tau = 0; tau < columns_total; ++tau) {
    double& out = expiring[tau % (J + 1)];
    live -= out;
    out = 0.0;
    if (nb != nullptr) {
      // Poisson jumps of the whole column, each assigned to a slice in
      // proportion to its area.
      const std::uint64_t jumps = draw_poisson(rng, column_rate);
      for (std::uint64_t i = 0; i < jumps; ++i) {
        const double u = rng.uniform() * cumulative.back();
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const auto k = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), J - 1);
        deposit(tau, k, static_cast<double>(draw_logarithmic(rng, nb->theta)));
      }
    } else {
      for (std::size_t k = 0; k < J; ++k) {
        deposit(tau, k, draw_slice(cfg.seed, table.areas[k], rng));
      }
    }
    if (tau + 1 >= J) {
      values[tau + 1 - J] = live;
    }
  }
  return TimeSeries(cfg.delta, std::move(values));
}

MomentReport moment_check(const TimeSeries& series, const TrawlSpec& trawl, const SeedSpec& seed,
                          std::size_t max_lag) {
  if (max_lag + 1 >= series.size()) {
    throw InsufficientDataError("max_lag must be smaller than the series length");
  }
  const SeedMoments mom = seed_moments(seed);
  const AcfTable acf = sample_acf(series, max_lag);
  MomentReport report;
  report.empirical_mean = acf.mean;
  report.theoretical_mean = leb_A(trawl) * mom.mean;
  report.empirical_variance = acf.gamma_hat[0];
  report.theoretical_variance = leb_A(trawl) * mom.variance;
  report.empirical_acf = acf.gamma_hat;
  report.theoretical_acf.resize(max_lag + 1);
  for (std::size_t l = 0; l <= max_lag; ++l) {
    report.theoretical_acf[l] = mom.variance * theoretical_acf(trawl, series.time(l));
  }
  report.quarticity = quarticity(series);
  report.theoretical_quarticity_limit = mom.c4 * eval_trawl(trawl, 0.0);
  return report;
}

}  // namespace trawlkit
