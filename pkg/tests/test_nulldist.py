import math

import numpy as np
import pytest
from scipy import integrate

from adspec.errors import DomainError, InvalidParameterError
from adspec.nulldist import (
    ad_limit_cdf,
    ad_limit_sf,
    ad_quantile,
    blocked_quantile,
    blocked_sf,
    mc_null_oracle,
)

# A = sum_j Y_j / (j (j + 1)) with Y_j chi-square(1): invert the characteristic
# function directly, independently of the series used by the package.
_N = 20000
_LAM = 1.0 / (np.arange(1, _N + 1) * np.arange(2, _N + 2))
_TAIL = 1.0 / (_N + 1)


def _log_cf(t):
    # truncated product plus the first-order contribution of the remainder
    return -0.5 * np.sum(np.log1p(-2j * t * _LAM)) + 1j * t * _TAIL


def gil_pelaez_cdf(x):
    def f(t):
        return np.exp(-1j * t * x + _log_cf(t)).imag / t
    val, _ = integrate.quad(f, 0, np.inf, limit=2000, epsabs=1e-11)
    return 0.5 - val / math.pi


class TestCDF:
    @pytest.mark.parametrize("x", [0.3, 0.7, 1.0, 1.5, 2.4924, 4.0, 7.0])
    def test_matches_characteristic_function_inversion(self, x):
        assert ad_limit_cdf(x) == pytest.approx(gil_pelaez_cdf(x), abs=1e-7)

    def test_support_and_clamps(self):
        assert ad_limit_cdf(0.0) == 0.0
        assert ad_limit_cdf(-1.0) == 0.0
        assert ad_limit_cdf(1e-9) == 0.0
        assert ad_limit_cdf(33.0) == 1.0
        assert ad_limit_sf(33.0) == 0.0

    def test_reference_points(self):
        assert ad_limit_cdf(2.4924) == pytest.approx(0.95, abs=2e-3)
        assert ad_limit_cdf(1.9330) == pytest.approx(0.90, abs=2e-3)

    def test_monotone_dense_grid(self):
        x = np.linspace(0, 40, 10_000)
        F = ad_limit_cdf(x)
        assert np.all(np.diff(F) >= 0)
        assert F[0] == 0.0 and F[-1] == 1.0

    def test_strictly_increasing_inside(self):
        x = np.linspace(0.05, 20, 2000)
        assert np.all(np.diff(ad_limit_cdf(x)) > 0)

    def test_sf_complements_cdf(self):
        x = np.linspace(0.01, 30, 500)
        np.testing.assert_allclose(ad_limit_cdf(x) + ad_limit_sf(x), 1.0, atol=1e-15)

    def test_continuity_at_junction(self):
        lo, hi = ad_limit_cdf(1.0 - 1e-12), ad_limit_cdf(1.0)
        assert abs(hi - lo) < 1e-10

    def test_scalar_and_array_shapes(self):
        assert np.ndim(ad_limit_cdf(2.0)) == 0
        assert ad_limit_cdf(np.ones((2, 3))).shape == (2, 3)


class TestQuantile:
    @pytest.mark.parametrize("p,x", [(0.95, 2.4924), (0.90, 1.9330)])
    def test_reference(self, p, x):
        assert ad_quantile(p) == pytest.approx(x, abs=1e-3)

    @pytest.mark.parametrize("p", [0.05, 0.5, 0.85, 0.9, 0.95, 0.99])
    def test_round_trip(self, p):
        assert abs(ad_limit_cdf(ad_quantile(p)) - p) <= 1e-8

    def test_increasing(self):
        ps = np.linspace(0.01, 0.999, 60)
        qs = [ad_quantile(float(p)) for p in ps]
        assert np.all(np.diff(qs) > 0)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
    def test_domain(self, p):
        with pytest.raises(DomainError):
            ad_quantile(p)


class TestBlocked:
    def test_B1_reduces(self):
        assert blocked_quantile(0.05, 1).value == ad_quantile(0.95)

    @pytest.mark.parametrize("alpha", [0.01, 0.05, 0.10, 0.15])
    @pytest.mark.parametrize("B", [1, 2, 3, 4, 6, 10])
    def test_solves_power_equation(self, alpha, B):
        cv = blocked_quantile(alpha, B)
        assert abs(ad_limit_cdf(cv.value) ** B - (1 - alpha)) <= 1e-8

    def test_B6(self):
        assert blocked_quantile(0.05, 6).value == ad_quantile(0.95 ** (1 / 6))

    def test_increasing_in_B(self):
        vals = [blocked_quantile(0.05, B).value for B in range(1, 9)]
        assert np.all(np.diff(vals) > 0)

    def test_errors(self):
        with pytest.raises(InvalidParameterError):
            blocked_quantile(0.05, 0)
        with pytest.raises(InvalidParameterError):
            blocked_quantile(0.05, 2.5)
        with pytest.raises(DomainError):
            blocked_quantile(1.0, 2)

    def test_sf_at_critical_value(self):
        for B in (1, 4):
            cv = blocked_quantile(0.1, B)
            assert blocked_sf(cv.value, B) == pytest.approx(0.1, abs=1e-8)

    def test_blocked_b6_against_simulation(self):
        # quantile of the max of 6 independent draws of the finite statistic
        table = mc_null_oracle(400, 10 ** 5, seed=31)
        rng = np.random.default_rng(5)
        draws = rng.choice(table.values, size=(100_000, 6)).max(axis=1)
        assert np.mean(draws > blocked_quantile(0.05, 6).value) == pytest.approx(0.05, abs=0.004)


class TestOracle:
    def test_deterministic(self):
        a = mc_null_oracle(50, 10 ** 5, seed=3)
        b = mc_null_oracle(50, 10 ** 5, seed=3)
        assert np.array_equal(a.values, b.values)
        assert np.all(np.diff(a.values) >= 0)

    def test_minimum_replications(self):
        with pytest.raises(InvalidParameterError):
            mc_null_oracle(10, 1000, seed=0)

    def test_median(self):
        table = mc_null_oracle(500, 10 ** 5, seed=12)
        assert float(table.quantile(0.5)) == pytest.approx(ad_quantile(0.5), abs=0.01)
        assert table.cdf(ad_quantile(0.95)) == pytest.approx(0.95, abs=3 * table.standard_error(0.95) + 0.002)
