#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/negative_binomial.hpp>
#include <catch_amalgamated.hpp>
#include <cmath>
#include <numeric>
#include <vector>

#include "trawlkit/errors.hpp"
#include "trawlkit/estimator.hpp"
#include "trawlkit/rng.hpp"
#include "trawlkit/simulator.hpp"

using namespace trawlkit;
using Catch::Approx;

namespace {

// asymptotic two-sample Kolmogorov-Smirnov p-value
double ks_two_sample_p(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  const double ne = static_cast<double>(a.size()) * b.size() / (a.size() + b.size());
  const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) {
    p += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
  }
  return std::clamp(p, 0.0, 1.0);
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double var_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size());
}

SimConfig nb_exp(std::size_t n, double delta = 0.1, std::uint64_t seed = 1) {
  SimConfig cfg{TrawlSpec::exponential(1.0), SeedSpec::negbin(0.2)};
  cfg.n = n;
  cfg.delta = delta;
  cfg.rng_seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("rng streams are reproducible and distinct") {
  Rng a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  bool differ_c = false, differ_d = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    REQUIRE(x == b());
    differ_c |= x != c();
    differ_d |= x != d();
  }
  CHECK(differ_c);
  CHECK(differ_d);
  Rng u(7, 3);
  for (int i = 0; i < 10000; ++i) {
    const double v = u.uniform();
    REQUIRE(v > 0.0);
    REQUIRE(v < 1.0);
  }
}

TEST_CASE("samplers have the right first two moments") {
  Rng rng(11, 0);
  const int N = 200000;
  std::vector<double> normal(N), pois(N), logd(N), gam(N), small_gam(N);
  for (int i = 0; i < N; ++i) {
    normal[i] = draw_standard_normal(rng);
    pois[i] = static_cast<double>(draw_poisson(rng, 3.5));
    logd[i] = static_cast<double>(draw_logarithmic(rng, 0.6));
    gam[i] = draw_gamma(rng, 2.5, 2.0);
    small_gam[i] = draw_gamma(rng, 0.05, 1.0);
  }
  CHECK(mean_of(normal) == Approx(0.0).margin(0.01));
  CHECK(var_of(normal) == Approx(1.0).margin(0.015));
  CHECK(mean_of(pois) == Approx(3.5).margin(0.02));
  CHECK(var_of(pois) == Approx(3.5).margin(0.05));
  const double theta = 0.6;
  const double lmean = -theta / ((1 - theta) * std::log1p(-theta));
  CHECK(mean_of(logd) == Approx(lmean).epsilon(0.01));
  CHECK(mean_of(gam) == Approx(5.0).epsilon(0.01));
  CHECK(var_of(gam) == Approx(10.0).epsilon(0.03));
  CHECK(mean_of(small_gam) == Approx(0.05).epsilon(0.05));
  // large-mean branch
  double s = 0;
  for (int i = 0; i < 20000; ++i) s += static_cast<double>(draw_poisson(rng, 100.0));
  CHECK(s / 20000 == Approx(100.0).margin(0.3));
}

TEST_CASE("slice areas partition the trawl set") {
  const double delta = 0.1;
  SECTION("strip integrals") {
    const auto ex = TrawlSpec::exponential(1.0);
    const auto sg = TrawlSpec::sup_gamma(0.1, 1.5);
    const SliceTable te = slice_areas(ex, delta, 200);
    const SliceTable ts = slice_areas(sg, delta, 200);
    CHECK(te.column_area() == Approx(0.0951625819640404).epsilon(1e-10));
    CHECK(ts.column_area() == Approx(0.2 * (1 - std::pow(2.0, -0.5))).epsilon(1e-10));
  }
  for (const auto& spec : {TrawlSpec::exponential(1.0), TrawlSpec::sup_gamma(0.1, 1.5),
                           TrawlSpec::exponential(3.0)}) {
    for (std::size_t J : {1u, 7u, 140u, 2000u}) {
      const SliceTable t = slice_areas(spec, delta, J);
      INFO(spec.describe() << " J=" << J);
      for (double a : t.areas) CHECK(a >= 0.0);
      CHECK(t.column_area() ==
            Approx(trawl_integral(spec, 0.0, delta)).epsilon(1e-10));
      double marginal = 0.0;
      for (std::size_t age = 0; age < J; ++age) marginal += t.covered_area(age);
      CHECK(marginal == Approx(leb_A(spec)).epsilon(1e-10));
    }
  }
  SECTION("overlaps reproduce the autocovariance up to the truncated tail") {
    const auto ex = TrawlSpec::exponential(1.0);
    const std::size_t J = 200;
    const SliceTable t = slice_areas(ex, delta, J);
    for (std::size_t h : {1u, 5u, 10u, 30u}) {
      double overlap = 0.0;
      for (std::size_t age = h; age < J; ++age) overlap += t.covered_area(age);
      CHECK(std::abs(overlap - leb_intersection(ex, h * delta)) <= 2.0 * t.tail_area);
    }
  }
}

TEST_CASE("truncation budget") {
  SimConfig cfg = nb_exp(1000);
  CHECK(truncation_columns(cfg) == 139);  // ceil(log(1e6) / 0.1)
  cfg.tail_cutoff = 1e9;
  CHECK_THROWS_AS(truncation_columns(cfg), ConfigError);
  SimConfig g{TrawlSpec::sup_gamma(0.1, 1.5), SeedSpec::gamma(0.64)};
  g.n = 100000;
  g.delta = 0.1;
  g.tail_cutoff = 1e5;
  CHECK_THROWS_AS(truncation_columns(g), ConfigError);
  g.tail_cutoff.reset();
  const std::size_t J = truncation_columns(g);
  CHECK(static_cast<double>(g.n + J - 1) * J <= 3e8);
  cfg.tail_cutoff = -1.0;
  CHECK_THROWS_AS(truncation_columns(cfg), ConfigError);
}

TEST_CASE("slice draws are infinitely divisible") {
  const double s1 = 0.03, s2 = 0.07;
  for (const auto& seed : {SeedSpec::negbin(0.2), SeedSpec::gamma(0.64), SeedSpec::gaussian(0.8)}) {
    Rng rng(5, 0);
    const int N = 100000;
    std::vector<double> sum(N), one(N);
    for (int i = 0; i < N; ++i) {
      sum[i] = draw_slice(seed, s1, rng) + draw_slice(seed, s2, rng);
      one[i] = draw_slice(seed, s1 + s2, rng);
    }
    INFO(seed.describe());
    CHECK(ks_two_sample_p(sum, one) > 1e-3);
    const auto m = seed_moments(seed);
    CHECK(mean_of(one) == Approx(m.mean * (s1 + s2)).margin(4 * std::sqrt(0.1 / N) + 1e-3));
  }
}

TEST_CASE("simulated paths are deterministic in the seed") {
  const auto a = simulate(nb_exp(2000, 0.1, 9));
  const auto b = simulate(nb_exp(2000, 0.1, 9));
  const auto c = simulate(nb_exp(2000, 0.1, 10));
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
  SimConfig s = nb_exp(2000, 0.1, 9);
  s.stream = 1;
  CHECK(simulate(s).values != a.values);
}

TEST_CASE("Gaussian seed with zero mean is centred") {
  SimConfig cfg{TrawlSpec::exponential(1.0), SeedSpec::gaussian(0.0)};
  cfg.n = 100000;
  cfg.delta = 0.1;
  cfg.rng_seed = 3;
  const auto path = simulate(cfg);
  CHECK(mean_of(path.values) == Approx(0.0).margin(0.05));
  CHECK(var_of(path.values) == Approx(1.0).margin(0.1));
}

TEST_CASE("negative binomial exponential path moments") {
  const auto path = simulate(nb_exp(100000, 0.1, 21));
  CHECK(mean_of(path.values) == Approx(0.8).margin(0.05));
  CHECK(var_of(path.values) == Approx(1.0).margin(0.1));
  for (double v : path.values) REQUIRE(v == std::floor(v));
  const auto rep = moment_check(path, TrawlSpec::exponential(1.0), SeedSpec::negbin(0.2), 10);
  CHECK(rep.theoretical_mean == Approx(0.8));
  CHECK(rep.theoretical_variance == Approx(1.0));
  CHECK(std::abs(rep.empirical_acf[10] / rep.empirical_acf[0] - std::exp(-1.0)) <= 0.05);
  CHECK(rep.theoretical_quarticity_limit == Approx(2.875));
}

TEST_CASE("quarticity of Gaussian paths vanishes at rate delta") {
  SimConfig cfg{TrawlSpec::exponential(1.0), SeedSpec::gaussian(0.0)};
  cfg.n = 100000;
  cfg.delta = 0.01;
  cfg.rng_seed = 8;
  const auto path = simulate(cfg);
  // increments are Gaussian with variance about 2 a(0) delta, so Q_n / delta -> 6 a(0)^2
  CHECK(quarticity(path) / cfg.delta == Approx(6.0).epsilon(0.1));
}

TEST_CASE("stationarity: halves agree within three standard errors") {
  const std::size_t n = 100000;
  const double delta = 0.1;
  const auto path = simulate(nb_exp(n, delta, 33));
  const auto ex = TrawlSpec::exponential(1.0);
  const double c4 = seed_moments(SeedSpec::negbin(0.2)).c4;
  // long-run variances of the sample mean and sample variance from the model
  double lrv_mean = 0.0, lrv_var = 0.0;
  for (int h = -2000; h <= 2000; ++h) {
    const double g = theoretical_acf(ex, std::abs(h) * delta);
    lrv_mean += g;
    lrv_var += 2 * g * g + c4 * g;
  }
  const std::size_t half = n / 2;
  std::vector<double> first(path.values.begin(), path.values.begin() + half);
  std::vector<double> second(path.values.begin() + half, path.values.end());
  const double se_mean = std::sqrt(2.0 * lrv_mean / half);
  const double se_var = std::sqrt(2.0 * lrv_var / half);
  CHECK(std::abs(mean_of(first) - mean_of(second)) < 3 * se_mean);
  CHECK(std::abs(var_of(first) - var_of(second)) < 3 * se_var);
}

TEST_CASE("marginal law is negative binomial") {
  // thin a long path so that retained observations are nearly independent
  const auto path = simulate(nb_exp(1000000, 0.1, 77));
  std::vector<long> counts;
  std::size_t total = 0;
  for (std::size_t i = 0; i < path.size(); i += 100) {
    const auto k = static_cast<std::size_t>(path.values[i]);
    if (k >= counts.size()) counts.resize(k + 1, 0);
    ++counts[k];
    ++total;
  }
  boost::math::negative_binomial_distribution<double> law(3.2, 0.8);
  double chi2 = 0.0;
  int bins = 0;
  double tail_expected = 1.0;
  long tail_observed = static_cast<long>(total);
  for (std::size_t k = 0;; ++k) {
    const double e = total * boost::math::pdf(law, static_cast<double>(k));
    const double rest = total * boost::math::cdf(boost::math::complement(law, static_cast<double>(k)));
    if (e < 5.0 || rest < 5.0) {
      tail_expected = total * boost::math::cdf(boost::math::complement(law, k - 1.0));
      break;
    }
    const long o = k < counts.size() ? counts[k] : 0;
    chi2 += (o - e) * (o - e) / e;
    tail_observed -= o;
    ++bins;
  }
  chi2 += (tail_observed - tail_expected) * (tail_observed - tail_expected) / tail_expected;
  ++bins;
  boost::math::chi_squared_distribution<double> ref(bins - 1);
  const double p = boost::math::cdf(boost::math::complement(ref, chi2));
  INFO("chi2=" << chi2 << " bins=" << bins);
  CHECK(p > 1e-3);
}
