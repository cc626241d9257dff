#include "trawlkit/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "trawlkit/config.hpp"
#include "trawlkit/errors.hpp"
#include "trawlkit/estimator.hpp"
#include "trawlkit/forecast.hpp"
#include "trawlkit/io.hpp"
#include "trawlkit/montecarlo.hpp"
#include "trawlkit/simulator.hpp"

namespace trawlkit {

namespace {

std::size_t default_jobs() {
  if (const char* env = std::getenv("TRAWLKIT_JOBS")) {
    try {
      return static_cast<std::size_t>(std::stoul(env));
    } catch (const std::exception&) {
      return 1;
    }
  }
  return 1;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

std::vector<double> read_losses(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::vector<double> v;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const std::string field = line.substr(b, line.find(',', b) - b);
    try {
      std::size_t used = 0;
      v.push_back(std::stod(field, &used));
    } catch (const std::exception&) {
      if (v.empty()) continue;  // header line
      throw ParseError(path + ": line " + std::to_string(row) + ": not a number");
    }
  }
  return v;
}

struct SimulateArgs {
  std::string config, out = "-";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
};

struct EstimateArgs {
  std::string in, out = "-";
  std::size_t max_lag = 30;
  double beta = 0.05;
  std::optional<std::size_t> N_n;
  std::optional<std::size_t> K_n;
};

struct SliceArgs {
  std::string in, out = "-";
  std::vector<double> horizons;
  std::vector<std::string> methods = {"trawl_sum", "trawl_sum_bc", "empirical_acf"};
};

struct McArgs {
  std::string config, out = "-", layout;
  std::optional<std::size_t> runs;
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
};

struct ForecastArgs {
  std::string in, out = "-";
  std::size_t window = 0, hmax = 0, stride = 1, jobs = 1;
  std::vector<std::string> predictors = {"trawl", "acf", "naive"};
  std::vector<int> powers = {1, 2};
  double offset = 0.0;
  std::optional<double> p_alpha, p_H, p_theta;
  double p_c = 1.0;
};

struct DmArgs {
  std::string a, b, out = "-";
  std::size_t h = 1;
  int power = 2;
};

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"trawlkit: simulation, nonparametric estimation and forecasting of trawl processes",
               "trawlkit"};
  app.require_subcommand(1);
  int precision = 6;
  app.add_option("--precision", precision, "significant digits in numeric output")
      ->check(CLI::Range(1, 17));
  const std::size_t env_jobs = default_jobs();

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "simulate a trawl process path");
  sim->add_option("--config", sa.config, "JSON simulation config")->required();
  sim->add_option("--out", sa.out, "output CSV ('-' for stdout)");
  sim->add_option("--seed", sa.seed, "RNG seed (overrides the config)");
  sim->add_option("--n", sa.n, "number of observations (overrides the config)");

  EstimateArgs ea;
  auto* est = app.add_subcommand("estimate", "estimate the trawl function with confidence bounds");
  est->add_option("--in", ea.in, "input series CSV")->required();
  est->add_option("--out", ea.out, "output CSV");
  est->add_option("--max-lag", ea.max_lag, "largest grid index L");
  est->add_option("--levels", ea.beta, "significance level beta of the intervals")
      ->check(CLI::Range(0.0, 1.0));
  est->add_option("--N-n", ea.N_n, "AVAR truncation index");
  est->add_option("--K-n", ea.K_n, "subsampling stride");

  SliceArgs la;
  auto* sl = app.add_subcommand("slices", "estimate trawl-set slice areas");
  sl->add_option("--in", la.in, "input series CSV")->required();
  sl->add_option("--horizons", la.horizons, "horizons (time units)")->required()->delimiter(',');
  sl->add_option("--methods", la.methods, "trawl_sum, trawl_sum_bc, empirical_acf")
      ->delimiter(',');
  sl->add_option("--out", la.out, "output CSV");

  McArgs ma;
  ma.jobs = env_jobs;
  auto* mc = app.add_subcommand("mc", "run a Monte Carlo study cell");
  mc->add_option("--config", ma.config, "JSON study cell")->required();
  mc->add_option("--runs", ma.runs, "Monte Carlo runs (overrides the config)");
  mc->add_option("--jobs", ma.jobs, "worker threads (0 = all cores)");
  mc->add_option("--seed", ma.seed, "RNG seed (overrides the config)");
  mc->add_option("--layout", ma.layout, "consistency, coverage or slices");
  mc->add_option("--out", ma.out, "output CSV");

  McArgs ca;
  ca.jobs = env_jobs;
  auto* mcc = app.add_subcommand("mc-coverage", "coverage table of the CLT statistics");
  mcc->add_option("--config", ca.config, "JSON study cell")->required();
  mcc->add_option("--runs", ca.runs, "Monte Carlo runs");
  mcc->add_option("--jobs", ca.jobs, "worker threads (0 = all cores)");
  mcc->add_option("--seed", ca.seed, "RNG seed");
  mcc->add_option("--out", ca.out, "output CSV");

  ForecastArgs fa;
  fa.jobs = env_jobs;
  auto* fc = app.add_subcommand("forecast", "rolling-window forecast evaluation");
  fc->add_option("--in", fa.in, "input series CSV")->required();
  fc->add_option("--window", fa.window, "estimation window length")->required();
  fc->add_option("--hmax", fa.hmax, "largest horizon in grid steps")->required();
  fc->add_option("--predictors", fa.predictors, "trawl, acf, naive, parametric")->delimiter(',');
  fc->add_option("--dm-power", fa.powers, "DM loss powers")->delimiter(',');
  fc->add_option("--offset", fa.offset, "subtracted from every observation");
  fc->add_option("--stride", fa.stride, "re-estimate every k origins");
  fc->add_option("--jobs", fa.jobs, "worker threads (0 = all cores)");
  fc->add_option("--alpha", fa.p_alpha, "parametric predictor: alpha");
  fc->add_option("--H", fa.p_H, "parametric predictor: H");
  fc->add_option("--c", fa.p_c, "parametric predictor: c");
  fc->add_option("--theta", fa.p_theta, "parametric predictor: theta");
  fc->add_option("--out", fa.out, "output CSV");

  DmArgs da;
  auto* dm = app.add_subcommand("dm-test", "Diebold-Mariano test of two loss series");
  dm->add_option("--a", da.a, "losses of the candidate predictor")->required();
  dm->add_option("--b", da.b, "losses of the benchmark predictor")->required();
  dm->add_option("--horizon", da.h, "forecast horizon in steps");
  dm->add_option("--power", da.power, "loss power (1 or 2)");
  dm->add_option("--out", da.out, "output CSV");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  auto num = [&](double x) { return format_number(x, precision); };
  try {
    if (*sim) {
      SimConfig cfg = parse_sim_config(read_text_file(sa.config));
      if (sa.seed) cfg.rng_seed = *sa.seed;
      if (sa.n) cfg.n = *sa.n;
      std::ostringstream os;
      write_series(os, simulate(cfg), std::max(precision, kLosslessPrecision));
      emit(sa.out, os.str(), out);
    } else if (*est) {
      const TimeSeries series = parse_series_file(ea.in);
      EstimateOptions opts;
      opts.max_lag = ea.max_lag;
      opts.N_n = ea.N_n;
      opts.K_n = ea.K_n;
      const TrawlEstimate te = estimate_all(series, opts);
      std::ostringstream os;
      os << "t,a_hat,a_hat_bc,a_prime,sigma2,ci_lo,ci_hi,flag\n";
      for (std::size_t l = 0; l < te.a_hat.size(); ++l) {
        const Interval ci =
            confidence_interval(te.a_hat[l], te.sigma2_hat[l], te.n, te.delta, ea.beta);
        os << num(series.time(l)) << ',' << num(te.a_hat[l]) << ',' << num(te.a_hat_bc[l]) << ','
           << num(te.a_hat_prime[l]) << ',' << num(te.sigma2_hat[l]) << ',' << num(ci.lo) << ','
           << num(ci.hi) << ',' << (te.degenerate[l] ? "degenerate" : "ok") << '\n';
      }
      emit(ea.out, os.str(), out);
    } else if (*sl) {
      const TimeSeries series = parse_series_file(la.in);
      std::ostringstream os;
      os << "method,h,leb_A,leb_cap,leb_minus,ratio_cap,ratio_minus\n";
      for (const auto& m : la.methods) {
        const SliceMethod method = slice_method_from_string(m);
        for (double h : la.horizons) {
          const SliceEstimate s = estimate_slices(series, h, method);
          os << to_string(method) << ',' << num(h) << ',' << num(s.leb_A) << ','
             << num(s.leb_cap) << ',' << num(s.leb_minus) << ',' << num(s.ratio_cap) << ','
             << num(s.ratio_minus) << '\n';
        }
      }
      emit(la.out, os.str(), out);
    } else if (*mc || *mcc) {
      const McArgs& a = *mc ? ma : ca;
      StudyCell cell = parse_study_cell(read_text_file(a.config));
      if (a.runs) cell.runs = *a.runs;
      if (a.seed) cell.sim.rng_seed = *a.seed;
      TableLayout layout = TableLayout::Consistency;
      if (*mcc) {
        cell.targets = {StudyTarget::Coverage};
        layout = TableLayout::Coverage;
      } else if (!a.layout.empty()) {
        layout = table_layout_from_string(a.layout);
      } else if (!cell.targets.empty()) {
        layout = table_layout_from_string(to_string(cell.targets.front()));
      }
      const CellResult result = run_cell(cell, a.jobs);
      emit(a.out, emit_table(result, layout, precision), out);
    } else if (*fc) {
      TimeSeries series = parse_series_file(fa.in);
      for (double& v : series.values) v -= fa.offset;
      std::vector<Predictor> predictors;
      for (const auto& p : fa.predictors) {
        if (p == "parametric") {
          if (!fa.p_alpha || !fa.p_H || !fa.p_theta) {
            throw ConfigError("the parametric predictor needs --alpha, --H and --theta");
          }
          predictors.push_back(Predictor::parametric(*fa.p_alpha, *fa.p_H, fa.p_c, *fa.p_theta));
        } else {
          predictors.push_back(predictor_from_string(p));
        }
      }
      ForecastOptions opts;
      opts.stride = fa.stride;
      opts.jobs = fa.jobs;
      opts.dm_powers = fa.powers;
      const ForecastReport rep = rolling_forecast(series, fa.window, fa.hmax, predictors, opts);
      std::ostringstream os;
      os << "h,predictor,mse,mae,ratio_vs_naive_mse,ratio_vs_naive_mae,dm_stat,dm_p,dm_stars,"
            "dm_power\n";
      for (const auto& r : rep.rows) {
        os << r.h << ',' << r.predictor << ',' << num(r.mse) << ',' << num(r.mae) << ','
           << num(r.ratio_vs_naive_mse) << ',' << num(r.ratio_vs_naive_mae) << ','
           << num(r.dm_stat) << ',' << num(r.dm_p) << ',' << dm_stars(r.dm_p) << ','
           << r.dm_power << '\n';
      }
      emit(fa.out, os.str(), out);
      err << "forecast origins: " << rep.count << "\n";
    } else if (*dm) {
      const auto a = read_losses(da.a);
      const auto b = read_losses(da.b);
      const DmResult r = dm_test(a, b, da.h, da.power);
      std::ostringstream os;
      os << "statistic,p_value,stars,deterministic\n"
         << num(r.statistic) << ',' << num(r.p_value) << ',' << dm_stars(r.p_value) << ','
         << (r.deterministic ? 1 : 0) << '\n';
      emit(da.out, os.str(), out);
    }
  } catch (const DegenerateEstimateError& e) {
    err << "error: degenerate estimate: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const InsufficientDataError& e) {
    err << "error: insufficient data: " << e.what() << "\n";
    return kExitData;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace trawlkit
