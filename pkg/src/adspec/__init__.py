"""Anderson-Darling tests for equality of the spectra of two time series."""

__version__ = "0.1.0"

from .adstat import ADValue, RatioSample, ad_statistic, ad_statistic_integral, empirical_cdf
from .errors import (
    AdspecError,
    ConsistencyError,
    DegenerateSpectrumError,
    DomainError,
    InstabilityError,
    InvalidInputError,
    InvalidParameterError,
)
from .harness import (
    Experiment,
    MCEstimate,
    ReplicationError,
    load_csv,
    rejection_probability,
    reproduce_table,
)
from .models import ModelSpec, simulate
from .nulldist import CriticalValue, ad_limit_cdf, ad_quantile, blocked_quantile, mc_null_oracle
from .spectral import BivariateSeries, dft, local_periodogram, periodogram, ratio_sample
from .testkit import TestConfig, TestResult, blocked_test, run_test, stationary_test

__all__ = [
    "ADValue", "RatioSample", "ad_statistic", "ad_statistic_integral", "empirical_cdf",
    "AdspecError", "ConsistencyError", "DegenerateSpectrumError", "DomainError",
    "InstabilityError", "InvalidInputError", "InvalidParameterError",
    "Experiment", "MCEstimate", "ReplicationError", "load_csv",
    "rejection_probability", "reproduce_table",
    "ModelSpec", "simulate",
    "CriticalValue", "ad_limit_cdf", "ad_quantile", "blocked_quantile", "mc_null_oracle",
    "BivariateSeries", "dft", "local_periodogram", "periodogram", "ratio_sample",
    "TestConfig", "TestResult", "blocked_test", "run_test", "stationary_test",
]
