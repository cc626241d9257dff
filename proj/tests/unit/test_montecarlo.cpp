#include <catch_amalgamated.hpp>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "trawlkit/errors.hpp"
#include "trawlkit/estimator.hpp"
#include "trawlkit/montecarlo.hpp"
#include "trawlkit/simulator.hpp"

using namespace trawlkit;
using Catch::Approx;

namespace {

StudyCell small_cell() {
  StudyCell cell{SimConfig{TrawlSpec::exponential(1.0), SeedSpec::negbin(0.2)}};
  cell.sim.n = 400;
  cell.sim.delta = 0.1;
  cell.sim.rng_seed = 99;
  cell.runs = 4;
  cell.times = {0.0, 0.5, 1.0};
  cell.targets = {StudyTarget::Consistency, StudyTarget::Coverage, StudyTarget::Slices};
  cell.slice_horizons = {0.1, 1.0};
  cell.slice_methods = {SliceMethod::TrawlSum, SliceMethod::EmpiricalAcf};
  return cell;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string l;
  while (std::getline(ss, l)) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("mean and SD helper") {
  const MeanSd m = mean_sd({1.0, 2.0, 6.0});
  CHECK(m.mean == Approx(3.0));
  CHECK(m.sd == Approx(std::sqrt(7.0)));
  CHECK(m.count == 3);
  const MeanSd n = mean_sd({1.0, NAN, 3.0});
  CHECK(n.mean == Approx(2.0));
  CHECK(n.sd == Approx(std::sqrt(2.0)));
  CHECK(n.count == 2);
}

TEST_CASE("small study cell") {
  const StudyCell cell = small_cell();
  const CellResult r = run_cell(cell, 1);
  REQUIRE(r.consistency.size() == 3);

  SECTION("consistency rows follow independently computed estimates") {
    std::vector<double> a1;
    for (std::size_t k = 0; k < cell.runs; ++k) {
      SimConfig sim = cell.sim;
      sim.stream = k;
      const TimeSeries s = simulate(sim);
      a1.push_back(estimate_trawl(s, 10)[10]);
    }
    const MeanSd m = mean_sd(a1);
    const ConsistencyRow& row = r.consistency[2];
    CHECK(row.t == 1.0);
    CHECK(row.mean == Approx(m.mean).epsilon(1e-12));
    CHECK(row.sd == Approx(m.sd).epsilon(1e-12));
    CHECK(row.truth == Approx(std::exp(-1.0)));
    CHECK(row.bias == row.mean - row.truth);
    CHECK(row.bias_bc == row.mean_bc - row.truth);
  }

  SECTION("slice rows") {
    CHECK(r.slices.size() == 2 * 2 * 5);
    for (const auto& row : r.slices) {
      CHECK(row.bias == row.mean - row.truth);
      if (row.quantity == "leb_A") CHECK(row.truth == Approx(1.0));
      if (row.quantity == "ratio_cap" && row.h == 1.0) CHECK(row.truth == Approx(std::exp(-1.0)));
    }
  }

  SECTION("output does not depend on the job count") {
    const CellResult p = run_cell(cell, 3);
    for (auto layout : {TableLayout::Consistency, TableLayout::Coverage, TableLayout::Slices}) {
      CHECK(emit_table(r, layout, 17) == emit_table(p, layout, 17));
    }
  }

  SECTION("coverage layout") {
    const auto ls = lines(emit_table(r, TableLayout::Coverage));
    const auto header = split(ls.at(0), ',');
    const std::size_t kinds = cell.stat_kinds.size();
    CHECK(header.size() == 3 + kinds * (2 + cell.levels.size()) + kinds);
    CHECK(header[3] == "infeasible_mean");
    CHECK(ls.size() == 1 + 2 * cell.times.size());
    for (std::size_t i = 1; i < ls.size(); ++i) CHECK(split(ls[i], ',').size() == header.size());
  }

  SECTION("consistency layout") {
    const auto ls = lines(emit_table(r, TableLayout::Consistency));
    CHECK(ls.at(0) == "t,n,mean,bias,sd,mean_bc,bias_bc,sd_bc");
    CHECK(ls.size() == 4);
  }
}

TEST_CASE("study cell errors and edge cases") {
  StudyCell cell = small_cell();
  cell.targets = {StudyTarget::Consistency};
  cell.runs = 2;
  const CellResult r = run_cell(cell);
  CHECK_THROWS_AS(emit_table(r, TableLayout::Slices), ConfigError);
  CHECK_THROWS_AS(emit_table(r, TableLayout::Coverage), ConfigError);

  CellResult empty;
  empty.targets = {StudyTarget::Consistency};
  CHECK(emit_table(empty, TableLayout::Consistency) == "t,n,mean,bias,sd,mean_bc,bias_bc,sd_bc\n");

  StudyCell bad = small_cell();
  bad.runs = 1;
  CHECK_THROWS_AS(run_cell(bad), ConfigError);
  bad = small_cell();
  bad.times = {100.0};
  CHECK_THROWS_AS(run_cell(bad), ConfigError);
  bad = small_cell();
  bad.subset_of = 10;
  CHECK_THROWS_AS(run_cell(bad), ConfigError);

  CHECK(table_layout_from_string("coverage") == TableLayout::Coverage);
  CHECK_THROWS_AS(table_layout_from_string("nope"), ConfigError);
  CHECK(study_target_from_string(to_string(StudyTarget::Slices)) == StudyTarget::Slices);
}

TEST_CASE("fixed-i reporting and subsets") {
  StudyCell cell = small_cell();
  cell.targets = {StudyTarget::Consistency};
  cell.mode = ReportMode::FixedI;
  cell.times.clear();
  cell.indices = {0, 3};
  CHECK(cell.report_times() == std::vector<double>{0.0, 0.30000000000000004});
  const CellResult r = run_cell(cell);
  CHECK(r.consistency.size() == 2);

  cell.subset_of = 800;
  const CellResult s = run_cell(cell);
  SimConfig longer = cell.sim;
  longer.n = 800;
  const TimeSeries full = simulate(longer);
  std::vector<double> head(full.values.begin(), full.values.begin() + 400);
  const double a0_first = estimate_a0(TimeSeries(0.1, head));
  CHECK(std::isfinite(a0_first));
  CHECK(s.consistency[0].n == 400);
}
