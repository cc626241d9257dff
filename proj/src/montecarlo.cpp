#include "trawlkit/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "trawlkit/errors.hpp"
#include "trawlkit/io.hpp"
#include "trawlkit/parallel.hpp"

namespace trawlkit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr const char* kSliceQuantities[] = {"leb_A", "leb_cap", "leb_minus", "ratio_cap",
                                            "ratio_minus"};

bool has_target(const std::vector<StudyTarget>& targets, StudyTarget t) {
  return std::find(targets.begin(), targets.end(), t) != targets.end();
}

// kinds that are defined at grid index i for this model
std::vector<StatKind> applicable_kinds(const std::vector<StatKind>& kinds, std::size_t i,
                                       double c4) {
  std::vector<StatKind> out;
  for (StatKind k : kinds) {
    if ((k == StatKind::FeasibleT0 || k == StatKind::FeasibleT0Gaussian) && i != 0) continue;
    if (k == StatKind::FeasibleT0Gaussian && c4 != 0.0) continue;
    out.push_back(k);
  }
  return out;
}

// Everything one run contributes, in a fixed layout.
struct RunOutput {
  std::vector<double> a_hat;     // per time
  std::vector<double> a_hat_bc;  // per time
  std::vector<std::vector<CltStatistic>> stats;  // per time, applicable kinds
  std::vector<double> slices;    // per (method, h, quantity); NaN when degenerate
};

std::string join_header(const std::vector<std::string>& cols) {
  std::string s;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) s += ',';
    s += cols[i];
  }
  return s + '\n';
}

std::string level_label(double q) {
  return std::to_string(static_cast<int>(std::lround(q * 100.0)));
}

}  // namespace

std::string_view to_string(StudyTarget t) {
  switch (t) {
    case StudyTarget::Consistency:
      return "consistency";
    case StudyTarget::Coverage:
      return "coverage";
    case StudyTarget::Slices:
      return "slices";
  }
  return "unknown";
}

StudyTarget study_target_from_string(std::string_view s) {
  if (s == "consistency") return StudyTarget::Consistency;
  if (s == "coverage") return StudyTarget::Coverage;
  if (s == "slices") return StudyTarget::Slices;
  throw ConfigError("unknown study target '" + std::string(s) + "'");
}

TableLayout table_layout_from_string(std::string_view s) {
  if (s == "consistency") return TableLayout::Consistency;
  if (s == "coverage") return TableLayout::Coverage;
  if (s == "slices") return TableLayout::Slices;
  throw ConfigError("unknown table layout '" + std::string(s) + "'");
}

std::vector<double> StudyCell::report_times() const {
  if (mode == ReportMode::FixedT) return times;
  std::vector<double> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(static_cast<double>(i) * sim.delta);
  return out;
}

MeanSd mean_sd(const std::vector<double>& values) {
  MeanSd r;
  double sum = 0.0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    sum += v;
    ++r.count;
  }
  if (r.count == 0) return {kNaN, kNaN, 0};
  r.mean = sum / static_cast<double>(r.count);
  if (r.count < 2) {
    r.sd = kNaN;
    return r;
  }
  double ss = 0.0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    ss += (v - r.mean) * (v - r.mean);
  }
  r.sd = std::sqrt(ss / static_cast<double>(r.count - 1));
  return r;
}

CellResult run_cell(const StudyCell& cell, std::size_t jobs) {
  if (cell.runs < 2) {
    throw ConfigError("a study cell needs at least 2 runs");
  }
  if (cell.subset_of && *cell.subset_of < cell.sim.n) {
    throw ConfigError("subset_of must be at least n");
  }
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> times = cell.report_times();
  const std::size_t n = cell.sim.n;
  const double delta = cell.sim.delta;
  std::vector<std::size_t> index(times.size());
  for (std::size_t j = 0; j < times.size(); ++j) {
    index[j] = grid_index(times[j], delta);
    if (index[j] + 3 > n) {
      throw ConfigError("report time " + format_number(times[j]) + " lies beyond the grid");
    }
  }
  const bool want_consistency = has_target(cell.targets, StudyTarget::Consistency);
  const bool want_coverage = has_target(cell.targets, StudyTarget::Coverage);
  const bool want_slices = has_target(cell.targets, StudyTarget::Slices);
  const SeedMoments mom = seed_moments(cell.sim.seed);
  const TrueModel truth{cell.sim.trawl, mom.c4};
  std::vector<std::vector<StatKind>> kinds_at(times.size());
  for (std::size_t j = 0; j < times.size(); ++j) {
    kinds_at[j] = applicable_kinds(cell.stat_kinds, index[j], mom.c4);
  }
  const std::size_t Q = std::size(kSliceQuantities);
  const std::size_t slice_cols = cell.slice_methods.size() * cell.slice_horizons.size() * Q;

  std::vector<RunOutput> runs(cell.runs);
  parallel_for(cell.runs, jobs, [&](std::size_t r) {
    try {
      SimConfig cfg = cell.sim;
      cfg.stream = r;
      if (cell.subset_of) cfg.n = *cell.subset_of;
      TimeSeries path = simulate(cfg);
      path.values.resize(n);
      RunOutput& out = runs[r];
      if (want_consistency && !times.empty()) {
        const std::size_t max_i = *std::max_element(index.begin(), index.end());
        const AcfTable acf = sample_acf(path, max_i + 1);
        const std::vector<double> a = estimate_trawl(path, acf, max_i);
        for (std::size_t j = 0; j < times.size(); ++j) {
          out.a_hat.push_back(a[index[j]]);
          out.a_hat_bc.push_back(a[index[j]] -
                                 0.5 * delta * estimate_derivative_at(path, index[j]));
        }
      }
      if (want_coverage) {
        out.stats.resize(times.size());
        for (std::size_t j = 0; j < times.size(); ++j) {
          if (kinds_at[j].empty()) continue;
          const double t[] = {times[j]};
          out.stats[j] = statistics(path, t, truth, kinds_at[j], cell.stat_opts);
        }
      }
      if (want_slices) {
        out.slices.reserve(slice_cols);
        for (SliceMethod m : cell.slice_methods) {
          for (double h : cell.slice_horizons) {
            try {
              const SliceEstimate s = estimate_slices(path, h, m);
              for (double v : {s.leb_A, s.leb_cap, s.leb_minus, s.ratio_cap, s.ratio_minus}) {
                out.slices.push_back(v);
              }
            } catch (const DegenerateEstimateError&) {
              out.slices.insert(out.slices.end(), Q, kNaN);
            }
          }
        }
      }
    } catch (const Error& e) {
      throw Error("run " + std::to_string(r) + ": " + e.what());
    }
  });

  CellResult result;
  result.runs = cell.runs;
  result.targets = cell.targets;
  result.stat_kinds = cell.stat_kinds;
  result.levels = cell.levels;
  const double variance = mom.variance;

  if (want_consistency) {
    std::vector<double> a(cell.runs), b(cell.runs);
    for (std::size_t j = 0; j < times.size(); ++j) {
      for (std::size_t r = 0; r < cell.runs; ++r) {
        a[r] = runs[r].a_hat[j];
        b[r] = runs[r].a_hat_bc[j];
      }
      ConsistencyRow row;
      row.t = times[j];
      row.n = n;
      row.truth = variance * eval_trawl(cell.sim.trawl, times[j]);
      const MeanSd ma = mean_sd(a);
      const MeanSd mb = mean_sd(b);
      row.mean = ma.mean;
      row.sd = ma.sd;
      row.bias = ma.mean - row.truth;
      row.mean_bc = mb.mean;
      row.sd_bc = mb.sd;
      row.bias_bc = mb.mean - row.truth;
      result.consistency.push_back(row);
    }
  }

  if (want_coverage) {
    for (std::size_t j = 0; j < times.size(); ++j) {
      for (StatKind k : cell.stat_kinds) {
        const auto it = std::find(kinds_at[j].begin(), kinds_at[j].end(), k);
        CoverageRow row;
        row.t = times[j];
        row.n = n;
        row.kind = k;
        if (it != kinds_at[j].end()) {
          const auto pos = static_cast<std::size_t>(it - kinds_at[j].begin());
          std::vector<CltStatistic> stats;
          stats.reserve(cell.runs);
          for (std::size_t r = 0; r < cell.runs; ++r) stats.push_back(runs[r].stats[j][pos]);
          for (const auto& s : stats) row.degenerate += s.degenerate ? 1 : 0;
          try {
            row.report = coverage(stats, cell.levels);
          } catch (const InsufficientDataError&) {
            row.report.reset();
          }
        } else {
          row.degenerate = cell.runs;
        }
        result.coverage.push_back(std::move(row));
      }
    }
  }

  if (want_slices) {
    std::size_t col = 0;
    std::vector<double> v(cell.runs);
    for (SliceMethod m : cell.slice_methods) {
      for (double h : cell.slice_horizons) {
        const double leb = variance * leb_A(cell.sim.trawl);
        const double cap = variance * leb_intersection(cell.sim.trawl, h);
        const double truths[] = {leb, cap, leb - cap, cap / leb, (leb - cap) / leb};
        for (std::size_t q = 0; q < Q; ++q, ++col) {
          std::size_t bad = 0;
          for (std::size_t r = 0; r < cell.runs; ++r) {
            v[r] = runs[r].slices[col];
            if (std::isnan(v[r])) ++bad;
          }
          const MeanSd ms = mean_sd(v);
          SliceRow row;
          row.method = m;
          row.h = h;
          row.quantity = kSliceQuantities[q];
          row.truth = truths[q];
          row.mean = ms.mean;
          row.sd = ms.sd;
          row.bias = ms.mean - row.truth;
          row.degenerate = bad;
          result.slices.push_back(row);
        }
      }
    }
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::string emit_table(const CellResult& result, TableLayout layout, int precision) {
  auto num = [&](double x) { return format_number(x, precision); };
  std::ostringstream os;
  const bool empty = result.runs == 0;
  switch (layout) {
    case TableLayout::Consistency: {
      if (!empty && !has_target(result.targets, StudyTarget::Consistency)) {
        throw ConfigError("result has no consistency target");
      }
      os << "t,n,mean,bias,sd,mean_bc,bias_bc,sd_bc\n";
      for (const auto& r : result.consistency) {
        os << num(r.t) << ',' << r.n << ',' << num(r.mean) << ',' << num(r.bias) << ','
           << num(r.sd) << ',' << num(r.mean_bc) << ',' << num(r.bias_bc) << ','
           << num(r.sd_bc) << '\n';
      }
      break;
    }
    case TableLayout::Coverage: {
      if (!empty && !has_target(result.targets, StudyTarget::Coverage)) {
        throw ConfigError("result has no coverage target");
      }
      std::vector<std::string> cols = {"t", "n", "summary"};
      for (StatKind k : result.stat_kinds) {
        const std::string p(to_string(k));
        cols.push_back(p + "_mean");
        cols.push_back(p + "_sd");
        for (double q : result.levels) cols.push_back(p + "_cov" + level_label(q));
      }
      for (StatKind k : result.stat_kinds) cols.push_back(std::string(to_string(k)) + "_degenerate");
      os << join_header(cols);
      const std::size_t K = result.stat_kinds.size();
      if (K == 0) break;
      for (std::size_t base = 0; base + K <= result.coverage.size(); base += K) {
        for (const bool all : {false, true}) {
          const auto& first = result.coverage[base];
          os << num(first.t) << ',' << first.n << ',' << (all ? "all_runs" : "non_degenerate");
          for (std::size_t k = 0; k < K; ++k) {
            const auto& row = result.coverage[base + k];
            if (row.report) {
              const CoverageSummary& s = all ? row.report->all_runs : row.report->non_degenerate;
              os << ',' << num(s.mean) << ',' << num(s.sd);
              for (double c : s.coverage) os << ',' << num(c);
            } else {
              for (std::size_t c = 0; c < 2 + result.levels.size(); ++c) os << ",nan";
            }
          }
          for (std::size_t k = 0; k < K; ++k) os << ',' << result.coverage[base + k].degenerate;
          os << '\n';
        }
      }
      break;
    }
    case TableLayout::Slices: {
      if (!empty && !has_target(result.targets, StudyTarget::Slices)) {
        throw ConfigError("result has no slices target");
      }
      os << "method,h,quantity,truth,mean,bias,sd,degenerate\n";
      for (const auto& r : result.slices) {
        os << to_string(r.method) << ',' << num(r.h) << ',' << r.quantity << ',' << num(r.truth)
           << ',' << num(r.mean) << ',' << num(r.bias) << ',' << num(r.sd) << ',' << r.degenerate
           << '\n';
      }
      break;
    }
  }
  return os.str();
}

}  // namespace trawlkit
