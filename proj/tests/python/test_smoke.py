import math

import pytest

import trawlkit as tk


def test_model_functions():
    ex = tk.TrawlSpec.exponential(1.0)
    assert tk.leb_A(ex) == pytest.approx(1.0)
    assert tk.eval_trawl(ex, 1.0) == pytest.approx(math.exp(-1.0))
    sg = tk.TrawlSpec.sup_gamma(0.1, 1.5)
    assert tk.leb_A(sg) == pytest.approx(0.2)
    with pytest.raises(tk.DomainError):
        tk.TrawlSpec.sup_gamma(0.1, 1.0)


def test_simulate_and_estimate():
    x = tk.simulate(tk.TrawlSpec.exponential(1.0), tk.SeedSpec.negbin(0.2), 0.1, 2000, 7)
    assert len(x) == 2000
    assert all(v >= 0 and v == int(v) for v in x)
    assert x == tk.simulate(tk.TrawlSpec.exponential(1.0), tk.SeedSpec.negbin(0.2), 0.1, 2000, 7)
    a = tk.estimate_trawl(x, 0.1, 10)
    assert len(a) == 11
    s = tk.estimate_slices(x, 0.1, 1.0)
    assert 0.0 <= s["ratio_cap"] <= 1.0


def test_toy_estimates():
    assert tk.sample_acf([1, 2, 0, 1], 1.0) == pytest.approx([0.5, -0.25, 0.0, 0.0], abs=1e-15)
    assert tk.estimate_trawl([1, 2, 0, 1], 1.0, 1) == pytest.approx([0.75, -0.25])
    assert tk.quarticity([1, 2, 0, 1], 1.0) == pytest.approx(2.25)
    with pytest.raises(tk.InsufficientDataError):
        tk.estimate_trawl([1, 2], 1.0, 0)


def test_dm_and_forecast():
    a = [abs(math.sin(i)) for i in range(50)]
    stat, p = tk.dm_test(a, a, 1, 2)
    assert (stat, p) == (0.0, 0.5)
    x = tk.simulate(tk.TrawlSpec.sup_gamma(0.1, 1.5), tk.SeedSpec.negbin(0.2), 0.1, 400, 3)
    count, rows = tk.rolling_forecast(x, 0.1, 300, 5)
    assert count == 95
    assert {r["predictor"] for r in rows} == {"trawl", "acf", "naive"}


def test_study_cell():
    cfg = """{"trawl": {"kind": "exp", "lambda": 1.0},
              "marginal": {"kind": "negbin", "theta": 0.2},
              "delta": 0.1, "n": 300, "runs": 2,
              "report": {"mode": "fixed_t", "times": [0.0, 0.5]}}"""
    table = tk.run_study(cfg)
    assert table.splitlines()[0] == "t,n,mean,bias,sd,mean_bc,bias_bc,sd_bc"
    assert len(table.splitlines()) == 3
