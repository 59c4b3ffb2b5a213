"""Tunneling times of PT-symmetric and epsilon-deformed complex barriers.

Units are ``2m = hbar = 1`` so that ``E = k**2``.  The package is organised
as

* :mod:`hartman.model`    -- parameter types and shared validation
* :mod:`hartman.xfer`     -- overflow-safe transfer matrices (the oracle)
* :mod:`hartman.spm`      -- stationary-phase times by finite differences
* :mod:`hartman.ptcell`   -- closed forms for one PT cell
* :mod:`hartman.layered`  -- N repeated cells via Chebyshev polynomials
* :mod:`hartman.reallimit`-- small-b series and the real-barrier limit
* :mod:`hartman.nonpt`    -- the epsilon-deformed cell and the slope law
* :mod:`hartman.audit`    -- quoted closed forms vs numerical oracles
* :mod:`hartman.cli`      -- command-line scans
"""
from ._kernels import BACKEND
from .errors import HartmanError
from .layered import layered_transmission, tau_layered
from .model import BarrierCell, LayeredSystem, ScatteringAmplitude, TunnelingTime
from .nonpt import nonpt_transmission, slope_law, tau_epsilon_expansion, tau_epsilon_numeric
from .ptcell import tau_infinity, tau_unit, unit_transmission
from .spm import square_barrier_time, tunneling_time_numeric
from .xfer import SegmentStack, stack_matrix, transmission_from_stack

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "HartmanError",
    "BarrierCell",
    "LayeredSystem",
    "ScatteringAmplitude",
    "TunnelingTime",
    "SegmentStack",
    "stack_matrix",
    "transmission_from_stack",
    "tunneling_time_numeric",
    "square_barrier_time",
    "unit_transmission",
    "tau_unit",
    "tau_infinity",
    "layered_transmission",
    "tau_layered",
    "nonpt_transmission",
    "tau_epsilon_numeric",
    "tau_epsilon_expansion",
    "slope_law",
]
