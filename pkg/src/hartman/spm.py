"""Stationary-phase (phase-time) machinery.

The phase time of a structure of extent ``L`` is

    tau = (1/2k) d/dk [theta(k) + k L],

where ``theta`` is the phase of ``t = 1/m22``.  Differentiation is done in
``k`` with a five-point central stencil and one Richardson level.  The
``+kL`` term is folded into the differentiated function (we differentiate
the phase of ``t * exp(ikL)``), which is the same derivative but keeps the
differenced quantity O(1) instead of O(kL).
"""
from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .errors import PhaseAmbiguityError, StepSizeError
from .model import ScatteringAmplitude, TunnelingTime, _check_k, require_tunneling

__all__ = [
    "ScatteringAmplitude",
    "TunnelingTime",
    "unwrap_phase",
    "five_point",
    "richardson_derivative",
    "phase_time",
    "tunneling_time_numeric",
    "square_barrier_phase",
    "square_barrier_time",
    "square_barrier_hartman_limit",
]

TWO_PI = 2.0 * math.pi
EPS = float(np.finfo(float).eps)


def unwrap_phase(k: Sequence[float], phase: Sequence[float], tol: float = 1e-9) -> np.ndarray:
    """Add multiples of 2*pi so that adjacent samples differ by less than pi.

    ``k`` must be strictly increasing.  A wrapped jump within ``tol`` of pi
    in magnitude cannot be resolved and raises :class:`PhaseAmbiguityError`.

    >>> unwrap_phase([0, 1, 2], [3.0, -3.0, -2.9]).round(4)
    array([3.    , 3.2832, 3.3832])
    """
    k = np.asarray(k, dtype=float)
    phase = np.asarray(phase, dtype=float)
    if k.shape != phase.shape or k.ndim != 1:
        raise ValueError("k and phase must be 1-D arrays of equal length")
    if k.size and np.any(np.diff(k) <= 0):
        raise ValueError("k must be strictly increasing")
    if phase.size < 2:
        return phase.copy()
    d = np.diff(phase)
    red = np.mod(d + math.pi, TWO_PI) - math.pi  # in [-pi, pi)
    if np.any(np.abs(np.abs(red) - math.pi) < tol):
        i = int(np.argmax(np.abs(np.abs(red) - math.pi) < tol))
        raise PhaseAmbiguityError(f"phase jump of pi between k={k[i]!r} and k={k[i + 1]!r}")
    out = np.empty_like(phase)
    out[0] = phase[0]
    out[1:] = phase[0] + np.cumsum(red)
    # restore the exact input values up to 2*pi multiples (no drift from cumsum)
    out[1:] = phase[1:] + TWO_PI * np.round((out[1:] - phase[1:]) / TWO_PI)
    return out


def five_point(f: Callable[[float], float], x: float, h: float) -> float:
    """Central difference ``[f(x-2h) - 8f(x-h) + 8f(x+h) - f(x+2h)] / 12h``."""
    return (f(x - 2 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2 * h)) / (12.0 * h)


def richardson_derivative(f: Callable[[float], float], x: float, h: float) -> tuple[float, float]:
    """Five-point derivative with one Richardson level.

    Returns ``(estimate, error)``.  The error adds the magnitude of the
    Richardson correction, ``|D(h/2) - D(h)| / 15``, to a round-off term
    ``10 eps max(1, |f(x)|) / h`` that dominates for very smooth ``f``.
    """
    d1 = five_point(f, x, h)
    d2 = five_point(f, x, 0.5 * h)
    corr = (d2 - d1) / 15.0
    roundoff = 10.0 * EPS * max(1.0, abs(f(x))) / h
    return d2 + corr, abs(corr) + roundoff


def _continuous_phase_fn(amplitude_fn, k0: float, extent: float):
    """Phase of ``t(k) exp(ik L)`` made continuous with respect to its value at ``k0``."""
    ref = amplitude_fn(k0).theta + k0 * extent

    def f(k):
        th = amplitude_fn(k).theta + k * extent
        return th - TWO_PI * round((th - ref) / TWO_PI)

    return f


def phase_time(
    amplitude_fn: Callable[[float], ScatteringAmplitude],
    k: float,
    extent: float,
    h: float | None = None,
) -> TunnelingTime:
    """Phase time of an arbitrary amplitude function of ``k`` over length ``extent``."""
    _check_k(k)
    if h is None:
        h = 1e-4 * k
    if h < 1e-8 * k:
        raise StepSizeError(f"step h={h!r} is below 1e-8*k")
    if k - 2 * h <= 0:
        raise StepSizeError("k - 2h must stay positive")
    f = _continuous_phase_fn(amplitude_fn, k, extent)
    d, err = richardson_derivative(f, k, h)
    return TunnelingTime(d / (2.0 * k), err / (2.0 * k))


def tunneling_time_numeric(system, k: float, h: float | None = None) -> TunnelingTime:
    """Finite-difference phase time of a :class:`~hartman.xfer.SegmentStack`."""
    from .xfer import transmission_from_stack

    return phase_time(lambda kk: transmission_from_stack(system, kk), k, system.extent, h)


# ---------------------------------------------------------------------------
# square barrier reference
# ---------------------------------------------------------------------------
def square_barrier_phase(u: float, L: float, k: float) -> float:
    """``arctan(f tanh(qL))`` with ``f = (k**2 - q**2) / (2kq)``: the phase of ``t exp(ikL)``."""
    q = require_tunneling(u, k)
    f = (k * k - q * q) / (2.0 * k * q)
    return math.atan(f * math.tanh(q * L))


def square_barrier_time(u: float, L: float, k: float) -> TunnelingTime:
    """Closed-form phase time of a real barrier of height ``u`` and width ``L``.

    ``tau = (1/2k) d/dk arctan(f tanh qL)``, differentiated analytically with
    ``dq/dk = -k/q``.

    >>> round(square_barrier_time(2.0, 2.0, 1.0).tau, 6)
    0.964028
    """
    q = require_tunneling(u, k)
    if L < 0:
        raise ValueError("L must be non-negative")
    f = (k * k - q * q) / (2.0 * k * q)
    dq = -k / q
    # f = (k^2 - q^2)/(2kq);  df/dk = [(2k - 2q q')(2kq) - (k^2 - q^2)(2q + 2k q')] / (2kq)^2
    df = ((2 * k - 2 * q * dq) * (2 * k * q) - (k * k - q * q) * (2 * q + 2 * k * dq)) / (2 * k * q) ** 2
    th = math.tanh(q * L)
    sech2 = 1.0 / math.cosh(q * L) ** 2 if q * L < 350 else 0.0
    g = f * th
    dg = df * th + f * sech2 * L * dq
    return TunnelingTime(dg / (1.0 + g * g) / (2.0 * k))


def square_barrier_hartman_limit(u: float, k: float) -> TunnelingTime:
    """Opaque-barrier limit ``1/(q k)``."""
    q = require_tunneling(u, k)
    return TunnelingTime(1.0 / (q * k))
