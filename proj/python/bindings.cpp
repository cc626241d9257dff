#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "trawlkit/config.hpp"
#include "trawlkit/errors.hpp"
#include "trawlkit/estimator.hpp"
#include "trawlkit/forecast.hpp"
#include "trawlkit/inference.hpp"
#include "trawlkit/montecarlo.hpp"
#include "trawlkit/simulator.hpp"
#include "trawlkit/trawl_model.hpp"

namespace py = pybind11;
using namespace trawlkit;

namespace {

TimeSeries to_series(const std::vector<double>& values, double delta) {
  return TimeSeries(delta, values);
}

}  // namespace

PYBIND11_MODULE(_trawlkit, m) {
  m.doc() = "Trawl process simulation, estimation and forecasting";

  auto base = py::register_exception<Error>(m, "TrawlkitError");
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<InsufficientDataError>(m, "InsufficientDataError", base.ptr());
  py::register_exception<DegenerateEstimateError>(m, "DegenerateEstimateError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  py::class_<TrawlSpec>(m, "TrawlSpec")
      .def_static("exponential", &TrawlSpec::exponential, py::arg("lam"))
      .def_static("sup_gamma", &TrawlSpec::sup_gamma, py::arg("alpha"), py::arg("H"))
      .def("__repr__", &TrawlSpec::describe);

  py::class_<SeedSpec>(m, "SeedSpec")
      .def_static("negbin", &SeedSpec::negbin, py::arg("theta"))
      .def_static("gamma", &SeedSpec::gamma, py::arg("shape"))
      .def_static("gaussian", &SeedSpec::gaussian, py::arg("mean") = 0.0);

  m.def("eval_trawl", &eval_trawl, py::arg("trawl"), py::arg("s"));
  m.def("leb_A", &leb_A, py::arg("trawl"));
  m.def("leb_intersection", &leb_intersection, py::arg("trawl"), py::arg("h"));
  m.def("theoretical_acf", &theoretical_acf, py::arg("trawl"), py::arg("h"));

  m.def(
      "simulate",
      [](const TrawlSpec& trawl, const SeedSpec& seed, double delta, std::size_t n,
         std::uint64_t rng_seed, std::uint64_t stream) {
        SimConfig cfg{trawl, seed};
        cfg.delta = delta;
        cfg.n = n;
        cfg.rng_seed = rng_seed;
        cfg.stream = stream;
        py::gil_scoped_release release;
        return simulate(cfg).values;
      },
      py::arg("trawl"), py::arg("seed"), py::arg("delta") = 0.1, py::arg("n") = 1000,
      py::arg("rng_seed") = 0, py::arg("stream") = 0);

  m.def(
      "simulate_json",
      [](const std::string& json) {
        const SimConfig cfg = parse_sim_config(json);
        return py::make_tuple(simulate(cfg).values, cfg.delta);
      },
      py::arg("config"));

  m.def(
      "sample_acf",
      [](const std::vector<double>& x, double delta) { return sample_acf(to_series(x, delta)).gamma_hat; },
      py::arg("values"), py::arg("delta"));
  m.def(
      "estimate_trawl",
      [](const std::vector<double>& x, double delta, std::size_t L) {
        return estimate_trawl(to_series(x, delta), L);
      },
      py::arg("values"), py::arg("delta"), py::arg("max_lag"));
  m.def(
      "estimate_derivative",
      [](const std::vector<double>& x, double delta, std::size_t L) {
        return estimate_derivative(to_series(x, delta), L);
      },
      py::arg("values"), py::arg("delta"), py::arg("max_lag"));
  m.def(
      "quarticity",
      [](const std::vector<double>& x, double delta) { return quarticity(to_series(x, delta)); },
      py::arg("values"), py::arg("delta"));

  m.def(
      "estimate_slices",
      [](const std::vector<double>& x, double delta, double h, const std::string& method) {
        const SliceEstimate s = estimate_slices(to_series(x, delta), h, slice_method_from_string(method));
        py::dict d;
        d["leb_A"] = s.leb_A;
        d["leb_cap"] = s.leb_cap;
        d["leb_minus"] = s.leb_minus;
        d["ratio_cap"] = s.ratio_cap;
        d["ratio_minus"] = s.ratio_minus;
        return d;
      },
      py::arg("values"), py::arg("delta"), py::arg("h"), py::arg("method") = "empirical_acf");

  m.def("closed_form_sigma2", &closed_form_sigma2, py::arg("trawl"), py::arg("c4"), py::arg("t"));

  m.def(
      "dm_test",
      [](const std::vector<double>& a, const std::vector<double>& b, std::size_t h, int power) {
        const DmResult r = dm_test(a, b, h, power);
        return py::make_tuple(r.statistic, r.p_value);
      },
      py::arg("loss_a"), py::arg("loss_b"), py::arg("h") = 1, py::arg("power") = 2);

  m.def(
      "rolling_forecast",
      [](const std::vector<double>& x, double delta, std::size_t window, std::size_t h_max,
         const std::vector<std::string>& predictors) {
        std::vector<Predictor> preds;
        for (const auto& p : predictors) preds.push_back(predictor_from_string(p));
        ForecastReport rep;
        {
          py::gil_scoped_release release;
          rep = rolling_forecast(to_series(x, delta), window, h_max, preds);
        }
        py::list rows;
        for (const auto& r : rep.rows) {
          py::dict d;
          d["h"] = r.h;
          d["predictor"] = r.predictor;
          d["mse"] = r.mse;
          d["mae"] = r.mae;
          d["ratio_vs_naive_mse"] = r.ratio_vs_naive_mse;
          d["dm_power"] = r.dm_power;
          d["dm_stat"] = r.dm_stat;
          d["dm_p"] = r.dm_p;
          rows.append(d);
        }
        return py::make_tuple(rep.count, rows);
      },
      py::arg("values"), py::arg("delta"), py::arg("window"), py::arg("h_max"),
      py::arg("predictors") = std::vector<std::string>{"trawl", "acf", "naive"});

  m.def(
      "run_study",
      [](const std::string& json, const std::string& layout, std::size_t jobs) {
        const StudyCell cell = parse_study_cell(json);
        CellResult r;
        {
          py::gil_scoped_release release;
          r = run_cell(cell, jobs);
        }
        return emit_table(r, table_layout_from_string(layout));
      },
      py::arg("config"), py::arg("layout") = "consistency", py::arg("jobs") = 1);
}
