#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trawlkit/estimator.hpp"
#include "trawlkit/inference.hpp"
#include "trawlkit/simulator.hpp"

namespace trawlkit {

enum class ReportMode { FixedT, FixedI };
enum class StudyTarget { Consistency, Coverage, Slices };

[[nodiscard]] std::string_view to_string(StudyTarget t);
[[nodiscard]] StudyTarget study_target_from_string(std::string_view s);

struct StudyCell {
  SimConfig sim;
  std::size_t runs = 200;
  ReportMode mode = ReportMode::FixedT;
  std::vector<double> times;          ///< FixedT
  std::vector<std::size_t> indices;   ///< FixedI: t = i * delta
  std::vector<StudyTarget> targets = {StudyTarget::Consistency};
  std::vector<StatKind> stat_kinds = {StatKind::Infeasible, StatKind::Feasible,
                                      StatKind::FeasibleBiasCorrected};
  std::vector<double> slice_horizons;
  std::vector<SliceMethod> slice_methods = {SliceMethod::EmpiricalAcf};
  std::vector<double> levels = kDefaultCoverageLevels;
  StatisticOptions stat_opts;
  /// Simulate paths of this length and keep the first sim.n observations.
  std::optional<std::size_t> subset_of;

  /// Report times: `times` in FixedT mode, i * delta in FixedI mode.
  [[nodiscard]] std::vector<double> report_times() const;
};

struct ConsistencyRow {
  double t = 0.0;
  std::size_t n = 0;
  double truth = 0.0;
  double mean = 0.0;
  double bias = 0.0;
  double sd = 0.0;
  double mean_bc = 0.0;
  double bias_bc = 0.0;
  double sd_bc = 0.0;
};

struct CoverageRow {
  double t = 0.0;
  std::size_t n = 0;
  StatKind kind = StatKind::Feasible;
  /// Empty when fewer than two usable statistics were available.
  std::optional<CoverageReport> report;
  std::size_t degenerate = 0;
};

struct SliceRow {
  SliceMethod method = SliceMethod::EmpiricalAcf;
  double h = 0.0;
  std::string quantity;  ///< leb_A, leb_cap, leb_minus, ratio_cap, ratio_minus
  double truth = 0.0;
  double mean = 0.0;
  double bias = 0.0;
  double sd = 0.0;
  std::size_t degenerate = 0;  ///< runs without a usable estimate
};

struct CellResult {
  std::size_t runs = 0;
  std::vector<StudyTarget> targets;
  std::vector<StatKind> stat_kinds;
  std::vector<double> levels;
  std::vector<ConsistencyRow> consistency;
  std::vector<CoverageRow> coverage;
  std::vector<SliceRow> slices;
  double wall_seconds = 0.0;  ///< not part of any emitted table
};

/// Runs the cell; run r uses RNG stream r of sim.rng_seed. Output does not
/// depend on `jobs` (0 = all hardware threads).
[[nodiscard]] CellResult run_cell(const StudyCell& cell, std::size_t jobs = 1);

/// Mean and SD with (R-1) divisor, ignoring NaN entries.
struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
  std::size_t count = 0;
};
[[nodiscard]] MeanSd mean_sd(const std::vector<double>& values);

enum class TableLayout { Consistency, Coverage, Slices };
[[nodiscard]] TableLayout table_layout_from_string(std::string_view s);

/// CSV text for one layout. Throws ConfigError when the cell did not compute
/// the requested target.
[[nodiscard]] std::string emit_table(const CellResult& result, TableLayout layout,
                                     int precision = 6);

}  // namespace trawlkit
