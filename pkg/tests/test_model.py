import cmath
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hartman.errors import RegimeError, ZeroDecayError
from hartman.model import (
    BarrierCell,
    LayeredSystem,
    barrier_wavevector,
    decay_parametrization,
    require_tunneling,
)


def test_cell_validation():
    with pytest.raises(ValueError):
        BarrierCell(2, 1, 0)
    with pytest.raises(ValueError):
        BarrierCell(2, -1, 1)
    with pytest.raises(ValueError):
        BarrierCell(math.nan, 1, 1)
    assert BarrierCell(2, 1, 1).is_pt
    assert not BarrierCell(2, 1, 1, 1.1).is_pt


def test_potentials():
    assert BarrierCell(2, 1, 1, 1.5).potentials == (complex(2, 1), complex(2, -1.5))


def test_layered_requires_pt_and_positive_n():
    with pytest.raises(ValueError):
        LayeredSystem(BarrierCell(2, 1, 1, 1.1), 2)
    with pytest.raises(ValueError):
        LayeredSystem(BarrierCell(2, 1, 1), 0)
    assert LayeredSystem(BarrierCell(2, 1, 0.5), 3).length == 3.0


@given(st.floats(-5, 5), st.floats(0, 5), st.floats(0.05, 3))
def test_decay_parametrization_squares_back(u, v, k):
    if u == k * k and v == 0:
        return
    p = decay_parametrization(u, v, k)
    kappa2 = p.kappa ** 2
    assert abs(kappa2 - complex(u - k * k, v)) <= 1e-12 * max(1.0, abs(complex(u - k * k, v)))
    assert -math.pi / 2 < p.phi <= math.pi / 2


def test_zero_decay():
    with pytest.raises(ZeroDecayError):
        decay_parametrization(1.0, 0.0, 1.0)


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(0.05, 3))
def test_barrier_wavevector_branch(vr, vi, k):
    K = barrier_wavevector(complex(vr, vi), k)
    assert K.imag >= 0
    assert abs(K * K - (k * k - complex(vr, vi))) <= 1e-12 * max(1.0, abs(k * k - complex(vr, vi)))


def test_require_tunneling():
    assert require_tunneling(2.0, 1.0) == 1.0
    with pytest.raises(RegimeError):
        require_tunneling(1.0, 1.0)
    with pytest.raises(ValueError):
        require_tunneling(2.0, -1.0)
