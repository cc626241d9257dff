"""Trawl process simulation, nonparametric estimation and forecasting."""

from ._trawlkit import (
    ConfigError,
    DegenerateEstimateError,
    DomainError,
    InsufficientDataError,
    ParseError,
    SeedSpec,
    TrawlkitError,
    TrawlSpec,
    closed_form_sigma2,
    dm_test,
    estimate_derivative,
    estimate_slices,
    estimate_trawl,
    eval_trawl,
    leb_A,
    leb_intersection,
    quarticity,
    rolling_forecast,
    run_study,
    sample_acf,
    simulate,
    simulate_json,
    theoretical_acf,
)

__all__ = [name for name in dir() if not name.startswith("_")]
