import cmath
import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hartman import _kernels
from hartman.errors import TransmissionOverflowError
from hartman.model import BarrierCell
from hartman.xfer import (
    SegmentStack,
    batch_stack_matrices,
    omega,
    periodic_transmission,
    reflection_from_stack,
    stack_matrix,
    transmission_from_stack,
    unit_cell_matrix,
)

from oracles import T_EXACT, T_LAYERED_3

cells = st.builds(
    BarrierCell,
    u=st.floats(0.5, 6.0),
    v=st.floats(0.0, 3.0),
    b=st.floats(0.05, 4.0),
    epsilon=st.floats(0.0, 2.0),
)


@pytest.mark.parametrize("key", sorted(T_EXACT))
def test_transmission_matches_high_precision_oracle(key):
    u, v, eps, b, k = key
    t = transmission_from_stack(SegmentStack.from_cell(BarrierCell(u, v, b, eps)), k).t
    assert abs(t - T_EXACT[key]) <= 1e-13 * abs(T_EXACT[key])


def test_three_cell_stack_matches_oracle():
    t = transmission_from_stack(SegmentStack.from_cell(BarrierCell(2, 1, 0.5), 3), 1.0).t
    assert abs(t - T_LAYERED_3) <= 1e-13 * abs(T_LAYERED_3)


def test_square_barrier_closed_form():
    u, L, k = 5.0, 1.3, 0.9
    q = math.sqrt(u - k * k)
    expected = cmath.exp(-1j * k * L) / (math.cosh(q * L) + 0.5j * (q / k - k / q) * math.sinh(q * L))
    t = transmission_from_stack(SegmentStack.square(u, L), k).t
    assert abs(t - expected) < 1e-14


def test_free_stack_is_identity():
    m = stack_matrix(SegmentStack.free(3.0), 0.7).value()
    assert np.allclose(m, np.eye(2), atol=1e-15)


@given(cells, st.floats(0.1, 2.5))
def test_unimodular(cell, k):
    M = unit_cell_matrix(cell, k)
    assert M.det_error() < 1e-9


@given(cells, st.floats(0.1, 2.5))
def test_flux_balance_for_real_potential(cell, k):
    real = BarrierCell(cell.u, 0.0, cell.b)
    stack = SegmentStack.from_cell(real)
    t = transmission_from_stack(stack, k)
    r = reflection_from_stack(stack, k)
    if t.log_magnitude < -30:
        return
    assert abs(t.magnitude ** 2 + abs(r) ** 2 - 1) < 1e-9


@given(st.floats(1.0, 6.0), st.floats(0.0, 3.0), st.floats(0.05, 2.0), st.floats(0.1, 0.9), st.integers(1, 12))
def test_periodic_formula_agrees_with_unrolled_product(u, v, b, kfrac, n):
    k = kfrac * math.sqrt(u)
    cell = BarrierCell(u, v, b)
    try:
        direct = transmission_from_stack(SegmentStack.from_cell(cell, n), k)
        per = periodic_transmission(unit_cell_matrix(cell, k), n, 2 * b, k)
    except TransmissionOverflowError:
        return
    assert abs(per.log_magnitude - direct.log_magnitude) < 1e-8
    dth = (per.theta - direct.theta + math.pi) % (2 * math.pi) - math.pi
    assert abs(dth) < 1e-8


def test_omega_is_real_for_pt_cell():
    cell = BarrierCell(2.0, 1.3, 0.7)
    W = complex(omega(unit_cell_matrix(cell, 1.1), 2 * cell.b, 1.1).value())
    assert abs(W.imag) <= 1e-13 * max(1.0, abs(W))


def test_opaque_stack_stays_finite():
    cell = BarrierCell(2.0, 1.0, 2000.0)
    t = transmission_from_stack(SegmentStack.from_cell(cell), 1.0)
    assert t.magnitude == 0.0
    assert math.isfinite(t.log_magnitude) and t.log_magnitude < -1000


def test_segment_validation():
    with pytest.raises(ValueError):
        SegmentStack.from_layers([(1.0, 0.0)])
    with pytest.raises(ValueError):
        SegmentStack.from_layers([(1.0, 1.0, -0.1)])


def test_extent_with_gaps():
    s = SegmentStack.from_layers([(1.0, 0.5, 0.2), (2.0, 0.3)])
    assert math.isclose(s.extent, 1.0)


def _random_batch(n_stacks, n_seg, seed=3):
    rng = np.random.default_rng(seed)
    V = rng.uniform(0, 5, (n_stacks, n_seg)) + 1j * rng.uniform(-2, 2, (n_stacks, n_seg))
    w = rng.uniform(0.05, 3.0, (n_stacks, n_seg))
    x0 = np.concatenate([np.zeros((n_stacks, 1)), np.cumsum(w, axis=1)[:, :-1]], axis=1)
    k = rng.uniform(0.2, 2.0, n_stacks)
    return V, w, x0, k


def _rescale(m, e, ref_e):
    return m * np.ldexp(1.0, (np.asarray(e) - np.asarray(ref_e)).astype(int))[..., None, None]


def test_backends_agree_single_and_batch():
    V, w, x0, k = _random_batch(40, 25)
    for i in range(5):
        m1, e1 = _kernels.stack_product_numba(V[i], w[i], x0[i], float(k[i]))
        m2, e2 = _kernels.stack_product_numpy(V[i], w[i], x0[i], float(k[i]))
        assert np.max(np.abs(_rescale(m1, e1, e2) - m2)) <= 1e-12 * np.max(np.abs(m2))
    mb1, eb1 = _kernels.batch_stack_product_numba(V, w, x0, k)
    mb2, eb2 = _kernels.batch_stack_product_numpy(V, w, x0, k)
    scale = np.max(np.abs(mb2), axis=(1, 2))[:, None, None]
    assert np.max(np.abs(_rescale(mb1, eb1, eb2) - mb2) / scale) < 1e-12


def test_batch_matches_scalar_path():
    V, w, x0, k = _random_batch(6, 8)
    mb, eb = batch_stack_matrices(V, w, x0, k)
    for i in range(6):
        m, e = _kernels.stack_product(V[i], w[i], x0[i], float(k[i]))
        assert np.max(np.abs(_rescale(mb[i], eb[i], e) - m)) <= 1e-12 * np.max(np.abs(m))


def test_batch_det_error_vectorised():
    V, w, x0, k = _random_batch(30, 10)
    m, e = batch_stack_matrices(V, w, x0, k)
    errs = _kernels.relative_det_error(m, e)
    assert errs.shape == (30,)
    assert np.all(errs < 1e-8)


def test_env_flag_selects_numpy_backend():
    code = "from hartman import _kernels as k; print(k.BACKEND, k.HAS_NUMBA)"
    env = dict(os.environ, HARTMAN_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "False"]


def test_numpy_backend_gives_same_transmission():
    code = (
        "from hartman.model import BarrierCell; from hartman.xfer import SegmentStack, transmission_from_stack;"
        "print(repr(transmission_from_stack(SegmentStack.from_cell(BarrierCell(3,0.7,0.6,0.8)),1.3).t))"
    )
    env = dict(os.environ, HARTMAN_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    t = complex(out.stdout.strip())
    ref = T_EXACT[(3.0, 0.7, 0.8, 0.6, 1.3)]
    assert abs(t - ref) <= 1e-13 * abs(ref)


@given(
    st.lists(st.tuples(st.floats(-3, 6), st.floats(-3, 3), st.floats(0.05, 1.5), st.floats(0, 1)), min_size=1, max_size=6),
    st.floats(0.1, 2.5),
)
def test_reciprocity_under_reversal(layers, k):
    segs = [(complex(a, b), w, g) for a, b, w, g in layers]
    fwd = SegmentStack.from_layers(segs)
    # mirror image: same layers in reverse order with the gaps shifted accordingly
    rev_layers = []
    for i, (V, w, _) in enumerate(reversed(segs)):
        gap = segs[len(segs) - 2 - i][2] if i < len(segs) - 1 else 0.0
        rev_layers.append((V, w, gap))
    rev = SegmentStack.from_layers(rev_layers)
    try:
        t1 = transmission_from_stack(fwd, k)
        t2 = transmission_from_stack(rev, k)
    except TransmissionOverflowError:
        return
    assert abs(t1.log_magnitude - t2.log_magnitude) < 1e-9
    assert abs((t1.theta - t2.theta + math.pi) % (2 * math.pi) - math.pi) < 1e-9
