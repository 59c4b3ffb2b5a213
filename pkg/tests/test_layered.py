import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hartman.errors import BandEdgeError, TransmissionOverflowError
from hartman.layered import chebyshev_eval, gchi_raw, layered_phase, layered_transmission, tau_layered
from hartman.model import BarrierCell, LayeredSystem
from hartman.ptcell import tau_infinity, tau_unit
from hartman.spm import phase_time
from hartman.xfer import SegmentStack, transmission_from_stack

from oracles import T_LAYERED_3, TAU_INF_2_1_1


def _cheb_reference(n, x):
    u = [1.0, 2 * x]
    t = [1.0, x]
    for _ in range(n):
        u.append(2 * x * u[-1] - u[-2])
        t.append(2 * x * t[-1] - t[-2])
    return u[n - 1], (u[n - 2] if n >= 2 else 0.0), t[n]


@given(st.integers(1, 30), st.floats(-3.0, 3.0))
def test_chebyshev_closed_forms_vs_recurrence(n, x):
    ch = chebyshev_eval(n, x)
    u1, u2, t = _cheb_reference(n, x)
    scale = max(1.0, abs(u1), abs(t))
    assert abs(ch.u_nm1 - u1) <= 1e-9 * scale
    assert abs(ch.u_nm2 - u2) <= 1e-9 * scale
    assert abs(ch.t_n - t) <= 1e-9 * scale


def test_chebyshev_near_one_uses_series():
    for n in (2, 7, 40):
        d = 1e-9  # second-order terms are O(n**4 d**2) < 1e-10
        ch = chebyshev_eval(n, 1.0 + d, d)
        # first-order expansions about x = 1: T_n' = n^2, U_{n-1}' = (n-1) n (n+1) / 3
        assert math.isclose(ch.u_nm1, n + d * (n - 1) * n * (n + 1) / 3, rel_tol=1e-10)
        assert math.isclose(ch.t_n, 1.0 + d * n * n, rel_tol=1e-10)


def test_layered_amplitude_oracle():
    t = layered_transmission(LayeredSystem(BarrierCell(2, 1, 0.5), 3), 1.0).t
    assert abs(t - T_LAYERED_3) <= 1e-13 * abs(T_LAYERED_3)


@given(st.floats(1.0, 6.0), st.floats(0.0, 3.0), st.floats(0.05, 2.0), st.floats(0.1, 0.9), st.integers(1, 10))
def test_layered_amplitude_vs_unrolled_stack(u, v, b, kfrac, n):
    k = kfrac * math.sqrt(u)
    sys_ = LayeredSystem(BarrierCell(u, v, b), n)
    try:
        ref = transmission_from_stack(SegmentStack.from_cell(sys_.cell, n), k)
    except TransmissionOverflowError:
        return
    got = layered_transmission(sys_, k)
    assert abs(got.log_magnitude - ref.log_magnitude) < 1e-8
    assert abs((got.theta - ref.theta + math.pi) % (2 * math.pi) - math.pi) < 1e-8


@given(st.floats(1.0, 6.0), st.floats(0.0, 3.0), st.floats(0.05, 1.5), st.floats(0.1, 0.9), st.integers(1, 8))
def test_closed_form_time_vs_finite_difference(u, v, b, kfrac, n):
    k = kfrac * math.sqrt(u)
    sys_ = LayeredSystem(BarrierCell(u, v, b), n)
    try:
        closed = tau_layered(sys_, k).tau
    except BandEdgeError:
        return
    num = phase_time(lambda kk: transmission_from_stack(SegmentStack.from_cell(sys_.cell, n), kk), k, sys_.length)
    assert abs(closed - num.tau) <= 1e-6 * max(1.0, abs(closed)) + 10 * num.error


@given(st.floats(1.0, 6.0), st.floats(0.0, 3.0), st.floats(0.05, 3.0), st.floats(0.1, 0.9))
def test_single_cell_reduces_to_unit(u, v, b, kfrac):
    k = kfrac * math.sqrt(u)
    cell = BarrierCell(u, v, b)
    try:
        tl = tau_layered(LayeredSystem(cell, 1), k).tau
    except BandEdgeError:
        return
    assert math.isclose(tl, tau_unit(cell, k).tau, rel_tol=1e-8, abs_tol=1e-10)


@pytest.mark.parametrize("n", [1, 2, 5, 50])
def test_opaque_saturation_for_any_n(n):
    tau = tau_layered(LayeredSystem(BarrierCell(2, 1, 25.0), n), 1.0).tau
    assert abs(tau - TAU_INF_2_1_1) < 1e-12


def test_huge_n_and_b():
    tau = tau_layered(LayeredSystem(BarrierCell(2, 1, 400.0), 1000), 1.0).tau
    assert abs(tau - tau_infinity(2, 1, 1).tau) < 1e-12


def test_phase_and_gchi_consistent():
    sys_ = LayeredSystem(BarrierCell(3.0, 0.7, 0.3), 4)
    ph = layered_phase(sys_, 1.3)
    assert math.isclose(ph.gchi, gchi_raw(3.0, 0.7, 1.3, 4, 0.3), rel_tol=1e-13)
