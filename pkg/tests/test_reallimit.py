import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hartman.errors import RegimeError
from hartman.layered import gchi_raw
from hartman.reallimit import (
    QUOTED_LIMIT_COEFFICIENTS,
    TANH_COEFFICIENTS,
    extrapolate_power_law,
    gchi_complex,
    gchi_real_limit,
    gchi_series_extract,
    numeric_taylor_extract,
    real_barrier_recovery,
    series_coefficient_limits,
    series_coefficients,
)

from oracles import GCHI_REAL_5_1_1, TAU_SQUARE_5_1_1

SERIES_POINTS = [(3.0, 0.7, 1.3), (2.5, 1.5, 0.8)]


def _bernoulli(n):
    B = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(Fraction(math.comb(m + 1, j)) * B[j] for j in range(m)) / (m + 1))
    return B


def test_tanh_coefficients_from_bernoulli_numbers():
    B = _bernoulli(10)
    for i, c in enumerate(TANH_COEFFICIENTS):
        n = i + 1
        expected = Fraction(2 ** (2 * n) * (2 ** (2 * n) - 1)) * B[2 * n] / math.factorial(2 * n)
        assert c == expected


def test_quoted_ninth_order_limit_coefficient_is_half_the_true_one():
    assert QUOTED_LIMIT_COEFFICIENTS[:4] == TANH_COEFFICIENTS[:4]
    assert QUOTED_LIMIT_COEFFICIENTS[4] * 2 == TANH_COEFFICIENTS[4]


def test_real_limit_oracle():
    assert abs(gchi_real_limit(5.0, 1.0, 1.0) - GCHI_REAL_5_1_1) < 1e-15


def test_taylor_extraction_of_known_function():
    fit = numeric_taylor_extract(np.tan, 0.5, degree=21)
    assert abs(fit.coefficient(1) - 1) < 1e-13
    assert abs(fit.coefficient(3) - 1 / 3) < 1e-12
    assert abs(fit.coefficient(5) - 2 / 15) < 1e-11


@pytest.mark.parametrize("u,v,k", SERIES_POINTS)
@pytest.mark.parametrize("n", [1, 2, 5])
def test_gchi_is_odd_in_b(u, v, k, n):
    fit = gchi_series_extract(u, v, k, n)
    assert fit.relative_even() < 1e-12


@pytest.mark.parametrize("u,v,k", SERIES_POINTS)
@pytest.mark.parametrize("n", [1, 2, 5])
@pytest.mark.parametrize("j", [1, 5, 7, 9])
def test_series_coefficients_match_taylor_fit(u, v, k, n, j):
    quoted = dict(zip((1, 3, 5, 7, 9), series_coefficients(u, v, k, n).as_list()))
    fit = gchi_series_extract(u, v, k, n)
    assert abs(quoted[j] / fit.coefficient(j) - 1) < 1e-9


@pytest.mark.parametrize("u,v,k", SERIES_POINTS)
@pytest.mark.parametrize("n", [1, 2, 5])
def test_cubic_closed_form_is_twice_the_taylor_coefficient(u, v, k, n):
    a3 = series_coefficients(u, v, k, n).a3
    fit = gchi_series_extract(u, v, k, n)
    assert abs(a3 / fit.coefficient(3) - 2) < 1e-9


def test_complex_b_agrees_with_real_evaluation():
    for b in (0.05, 0.2, -0.13):
        assert abs(gchi_complex(3.0, 0.7, 1.3, 2, complex(b)) - gchi_raw(3.0, 0.7, 1.3, 2, b)) < 1e-13


@given(st.floats(1.0, 8.0), st.floats(0.05, 0.95), st.floats(0.1, 3.0), st.integers(1, 50))
def test_real_stack_is_a_single_real_barrier(u, kfrac, L, n):
    k = kfrac * math.sqrt(u)
    g = gchi_raw(u, 0.0, k, n, L / (2 * n))
    assert math.isclose(g, gchi_real_limit(u, k, L), rel_tol=1e-9, abs_tol=1e-12)


@given(st.floats(1.0, 8.0), st.floats(0.05, 0.95), st.floats(0.1, 2.0))
def test_coefficient_limits_sum_towards_real_limit(u, kfrac, L):
    k = kfrac * math.sqrt(u)
    q = math.sqrt(u - k * k)
    if q * L > 0.6:  # keep well inside the tanh radius of convergence
        return
    s = sum(series_coefficient_limits(u, k, L))
    f = (k * k - q * q) / (2 * k * q)
    assert abs(s - gchi_real_limit(u, k, L)) <= abs(f) * (q * L) ** 11 * 0.01 + 1e-15


def test_recovery_of_real_barrier():
    r = real_barrier_recovery(5.0, 1.0, 1.0, 1.0)
    assert r.monotone
    assert r.gchi_deviation[-1] < 1e-6
    assert abs(r.tau_square - TAU_SQUARE_5_1_1) < 1e-14
    assert abs(r.tau_extrapolated - TAU_SQUARE_5_1_1) < 1e-9
    assert abs(r.fitted_order - 2) < 0.01


def test_power_law_extrapolation():
    ns = np.array([10, 20, 40, 80])
    lim, order = extrapolate_power_law(ns, 3.0 + 5.0 / ns ** 2)
    assert abs(lim - 3.0) < 1e-12 and abs(order - 2) < 1e-9


def test_regime_error():
    with pytest.raises(RegimeError):
        gchi_real_limit(1.0, 1.0, 1.0)
