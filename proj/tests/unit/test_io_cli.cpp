#include <catch_amalgamated.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "trawlkit/cli.hpp"
#include "trawlkit/config.hpp"
#include "trawlkit/errors.hpp"
#include "trawlkit/io.hpp"
#include "trawlkit/simulator.hpp"

using namespace trawlkit;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("trawlkit_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "trawlkit");
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

void write(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("series CSV round trip") {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> noise;
  std::vector<double> v(100);
  for (auto& x : v) x = noise(gen) * 1e3;
  const TimeSeries s(0.01, v);
  std::stringstream ss;
  write_series(ss, s);
  const TimeSeries back = parse_series(ss);
  CHECK(back.delta == Catch::Approx(0.01).epsilon(1e-12));
  CHECK(back.values == v);
}

TEST_CASE("series CSV errors") {
  SECTION("bad time step names row 2") {
    std::istringstream in("time,value\n0,1\n0,2\n0.2,3\n");
    try {
      (void)parse_series(in);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }
  }
  SECTION("missing value") {
    std::istringstream in("time,value\n0,1\n0.1,\n");
    CHECK_THROWS_AS(parse_series(in), ParseError);
  }
  SECTION("irregular grid") {
    std::istringstream in("time,value\n0,1\n0.1,2\n0.5,3\n");
    CHECK_THROWS_AS(parse_series(in), ParseError);
  }
  SECTION("too short") {
    std::istringstream in("time,value\n0,1\n");
    CHECK_THROWS_AS(parse_series(in), InsufficientDataError);
  }
  SECTION("delta header") {
    std::istringstream in("# delta=0.5\ntime,value\n0,1\n0.5,2\n1.0,4\n");
    const TimeSeries s = parse_series(in);
    CHECK(s.delta == 0.5);
    CHECK(s.values == std::vector<double>{1, 2, 4});
  }
  CHECK(format_number(NAN) == "nan");
}

TEST_CASE("JSON configuration") {
  const SimConfig c = parse_sim_config(
      R"({"trawl": {"kind": "supgamma", "alpha": 0.1, "H": 1.5},
          "marginal": {"kind": "gamma", "shape": 0.64}, "delta": 0.05, "n": 123, "rng_seed": 7})");
  CHECK(c.n == 123);
  CHECK(c.delta == 0.05);
  CHECK(c.rng_seed == 7);
  CHECK(std::holds_alternative<TrawlSpec::SupGamma>(c.trawl.kind()));
  CHECK_THROWS_AS(parse_sim_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_sim_config(R"({"trawl": {"kind": "exp", "lambda": 1}})"), ConfigError);
  CHECK_THROWS_AS(parse_sim_config(R"({"trawl": {"kind": "exp", "lambda": "x"},
                                       "marginal": {"kind": "gaussian"}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_sim_config(R"({"trawl": {"kind": "supgamma", "alpha": 0.1, "H": 0.9},
                                       "marginal": {"kind": "gaussian"}})"),
                  ConfigError);
  const StudyCell cell = parse_study_cell(
      R"({"trawl": {"kind": "exp", "lambda": 1}, "marginal": {"kind": "negbin", "theta": 0.2},
          "n": 500, "runs": 3, "report": {"mode": "fixed_i", "indices": [0, 5]},
          "targets": ["coverage"], "statistics": ["feasible"]})");
  CHECK(cell.runs == 3);
  CHECK(cell.mode == ReportMode::FixedI);
  CHECK(cell.indices == std::vector<std::size_t>{0, 5});
  CHECK(cell.stat_kinds == std::vector<StatKind>{StatKind::Feasible});
}

TEST_CASE("command line") {
  TempDir dir;
  const std::string cfg = dir.file("sim.json");
  write(cfg, R"({"trawl": {"kind": "exp", "lambda": 1.0},
                 "marginal": {"kind": "negbin", "theta": 0.2},
                 "delta": 0.1, "n": 600, "rng_seed": 11})");
  const std::string series = dir.file("x.csv");

  SECTION("help and usage errors") {
    CHECK(run({"--help"}).code == kExitOk);
    CHECK(run({"simulate", "--bogus"}).code == kExitUsage);
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"--precision", "40", "simulate", "--config", cfg}).code == kExitUsage);
  }

  SECTION("simulate, estimate and slices") {
    REQUIRE(run({"simulate", "--config", cfg, "--out", series}).code == kExitOk);
    const TimeSeries s = parse_series_file(series);
    CHECK(s.size() == 600);
    SimConfig direct = parse_sim_config(read_text_file(cfg));
    CHECK(s.values == simulate(direct).values);

    const Run again = run({"simulate", "--config", cfg, "--out", "-", "--n", "50", "--seed", "3"});
    CHECK(again.code == kExitOk);
    CHECK(count_lines(again.out) >= 51);

    const Run est = run({"estimate", "--in", series, "--max-lag", "10"});
    REQUIRE(est.code == kExitOk);
    CHECK(est.out.rfind("t,a_hat,a_hat_bc,a_prime,sigma2,ci_lo,ci_hi,flag\n", 0) == 0);
    CHECK(count_lines(est.out) == 12);

    const Run sl = run({"slices", "--in", series, "--horizons", "0.1,1.0", "--methods",
                        "trawl_sum,empirical_acf"});
    REQUIRE(sl.code == kExitOk);
    CHECK(count_lines(sl.out) == 5);
  }

  SECTION("data errors map to exit codes") {
    const std::string tiny = dir.file("tiny.csv");
    write(tiny, "time,value\n0,1\n0.1,2\n");
    const Run r = run({"estimate", "--in", tiny});
    CHECK(r.code == kExitData);
    CHECK(r.err.find("insufficient data") != std::string::npos);

    const std::string flat = dir.file("flat.csv");
    std::string text = "time,value\n";
    for (int i = 0; i < 50; ++i) text += std::to_string(i * 0.1) + ",2\n";
    write(flat, text);
    const Run d = run({"estimate", "--in", flat});
    CHECK(d.code == kExitDegenerate);
    CHECK(d.err.find("degenerate") != std::string::npos);

    CHECK(run({"estimate", "--in", dir.file("missing.csv")}).code == kExitData);
  }

  SECTION("forecast and DM test") {
    SimConfig sc = parse_sim_config(read_text_file(cfg));
    sc.n = 400;
    write_series_file(series, simulate(sc));
    const Run f = run({"forecast", "--in", series, "--window", "300", "--hmax", "5",
                       "--predictors", "trawl,acf,naive"});
    REQUIRE(f.code == kExitOk);
    CHECK(f.err.find("forecast origins: 95") != std::string::npos);
    CHECK(f.out.rfind("h,predictor,mse,mae,ratio_vs_naive_mse,ratio_vs_naive_mae,dm_stat,dm_p,"
                      "dm_stars,dm_power\n",
                      0) == 0);

    const std::string a = dir.file("a.csv"), b = dir.file("b.csv");
    std::string ta, tb;
    for (int i = 0; i < 30; ++i) {
      ta += std::to_string(1.0 + 0.1 * (i % 3)) + "\n";
      tb += std::to_string(1.0 + 0.1 * (i % 3)) + "\n";
    }
    write(a, ta);
    write(b, tb);
    const Run dm = run({"dm-test", "--a", a, "--b", b, "--horizon", "1", "--power", "2"});
    REQUIRE(dm.code == kExitOk);
    CHECK(dm.out.find("0,0.5") != std::string::npos);
  }

  SECTION("Monte Carlo cells") {
    const std::string cell = dir.file("cell.json");
    write(cell, R"({"trawl": {"kind": "exp", "lambda": 1.0},
                    "marginal": {"kind": "negbin", "theta": 0.2},
                    "delta": 0.1, "n": 300, "rng_seed": 1, "runs": 3,
                    "report": {"mode": "fixed_t", "times": [0.0, 0.5]},
                    "targets": ["consistency", "coverage"]})");
    const Run one = run({"mc", "--config", cell, "--jobs", "1"});
    const Run two = run({"mc", "--config", cell, "--jobs", "2"});
    REQUIRE(one.code == kExitOk);
    CHECK(one.out == two.out);
    CHECK(count_lines(one.out) == 3);
    const Run cov = run({"mc-coverage", "--config", cell});
    REQUIRE(cov.code == kExitOk);
    CHECK(count_lines(cov.out) == 5);
    CHECK(run({"mc", "--config", cell, "--layout", "slices"}).code == kExitData);
  }
}

TEST_CASE("installed CLI binary runs") {
  const char* exe = std::getenv("TRAWLKIT_CLI");
  if (exe == nullptr) SKIP("TRAWLKIT_CLI not set");
  const std::string cmd = std::string(exe) + " --help > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
}
