"""Transfer matrices for stacks of complex rectangular barriers.

Convention: a matrix ``M`` maps the plane-wave amplitudes on the left of a
region, ``psi = A- exp(ikx) + B- exp(-ikx)``, to those on the right,
``(A+, B+) = M (A-, B-)``.  For a wave incident from the left, ``t = 1/m22``
and ``r = -m21/m22``.  Free propagation is the identity in this convention,
so positions enter only through the phase factors of each barrier.

This module is the independent oracle for all the closed forms in the
package; it knows nothing about xi, chi or Chebyshev polynomials.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import TransmissionOverflowError
from .model import BarrierCell, ScatteringAmplitude, _check_k
from .scaled import Scaled


@dataclass(frozen=True)
class TransferMatrix:
    """2x2 complex matrix stored as ``mantissa * 2**exp``."""

    mantissa: np.ndarray
    exp: int = 0

    def __post_init__(self):
        m = np.asarray(self.mantissa, dtype=np.complex128).reshape(2, 2)
        m.setflags(write=False)
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "exp", int(self.exp))

    @classmethod
    def identity(cls) -> "TransferMatrix":
        return cls(np.eye(2, dtype=np.complex128), 0)

    def entry(self, i: int, j: int) -> Scaled:
        return Scaled(complex(self.mantissa[i, j]), self.exp)

    @property
    def m11(self) -> complex:
        return complex(self.entry(0, 0).value())

    @property
    def m12(self) -> complex:
        return complex(self.entry(0, 1).value())

    @property
    def m21(self) -> complex:
        return complex(self.entry(1, 0).value())

    @property
    def m22(self) -> complex:
        return complex(self.entry(1, 1).value())

    def value(self) -> np.ndarray:
        """Unscaled matrix (entries may overflow to inf for opaque stacks)."""
        with np.errstate(over="ignore"):
            return self.mantissa * np.ldexp(1.0, self.exp)

    def det(self) -> Scaled:
        m = self.mantissa
        return Scaled(complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]), 2 * self.exp)

    def det_error(self) -> float:
        """Relative unimodularity defect, see :func:`_kernels.relative_det_error`."""
        return float(_kernels.relative_det_error(self.mantissa, self.exp))

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        return compose(self, other)


def _renormalised(m: np.ndarray, e: int) -> TransferMatrix:
    big = float(np.max(np.abs(m)))
    if big > 0 and not (2.0 ** -256 <= big <= 2.0 ** 256) and math.isfinite(big):
        sh = math.frexp(big)[1]
        m = m * math.ldexp(1.0, -sh)
        e += sh
    return TransferMatrix(m, e)


def compose(right: TransferMatrix, left: TransferMatrix) -> TransferMatrix:
    """Matrix of ``left`` followed (in space) by ``right``: ``right @ left``."""
    return _renormalised(right.mantissa @ left.mantissa, right.exp + left.exp)


def barrier_matrix(V: complex, width: float, left_edge: float, k: float) -> TransferMatrix:
    """Transfer matrix of a constant potential ``V`` on ``[left_edge, left_edge + width]``."""
    _check_k(k)
    if not width > 0:
        raise ValueError(f"barrier width must be positive, got {width!r}")
    m, e = _kernels.stack_product(
        np.array([complex(V)]), np.array([float(width)]), np.array([float(left_edge)]), k
    )
    return TransferMatrix(m, e)


@dataclass(frozen=True)
class Segment:
    V: complex
    width: float
    gap_after: float = 0.0


@dataclass(frozen=True)
class SegmentStack:
    """Ordered barriers starting at ``start``; each followed by an optional free gap."""

    segments: tuple = field(default_factory=tuple)
    start: float = 0.0

    def __post_init__(self):
        segs = tuple(s if isinstance(s, Segment) else Segment(*s) for s in self.segments)
        for s in segs:
            if not s.width > 0:
                raise ValueError(f"segment widths must be positive, got {s.width!r}")
            if not s.gap_after >= 0:
                raise ValueError(f"gaps must be non-negative, got {s.gap_after!r}")
        object.__setattr__(self, "segments", segs)

    def __len__(self) -> int:
        return len(self.segments)

    def arrays(self):
        """``(V, widths, left_edges)`` as numpy arrays."""
        V = np.array([complex(s.V) for s in self.segments], dtype=np.complex128)
        w = np.array([float(s.width) for s in self.segments], dtype=np.float64)
        steps = np.array([s.width + s.gap_after for s in self.segments], dtype=np.float64)
        x0 = self.start + np.concatenate(([0.0], np.cumsum(steps)[:-1])) if len(steps) else steps
        return V, w, np.asarray(x0, dtype=np.float64)

    @property
    def extent(self) -> float:
        """Distance from the first left edge to the last right edge."""
        if not self.segments:
            return 0.0
        _, w, x0 = self.arrays()
        return float(x0[-1] + w[-1] - self.start)

    # -- constructors -----------------------------------------------------------
    @classmethod
    def from_layers(cls, layers: Iterable[tuple], start: float = 0.0) -> "SegmentStack":
        return cls(tuple(Segment(*layer) for layer in layers), start)

    @classmethod
    def square(cls, u: float, L: float) -> "SegmentStack":
        return cls((Segment(complex(u), L),))

    @classmethod
    def free(cls, L: float) -> "SegmentStack":
        return cls((Segment(0j, L),))

    @classmethod
    def from_cell(cls, cell: BarrierCell, n_repeats: int = 1) -> "SegmentStack":
        """The 2N-segment unrolled layered system (cell on ``[0, 2b]`` repeated)."""
        left, right = cell.potentials
        segs = []
        for _ in range(int(n_repeats)):
            segs.append(Segment(left, cell.b))
            segs.append(Segment(right, cell.b))
        return cls(tuple(segs))


def stack_matrix(stack: SegmentStack, k: float) -> TransferMatrix:
    _check_k(k)
    if len(stack) == 0:
        return TransferMatrix.identity()
    V, w, x0 = stack.arrays()
    m, e = _kernels.stack_product(V, w, x0, k)
    return TransferMatrix(m, e)


def _amplitude_from_m22(m22: Scaled) -> ScatteringAmplitude:
    if m22.log_abs() < math.log(1e-300):
        raise TransmissionOverflowError("transmission resonance overflow: |m22| < 1e-300")
    return ScatteringAmplitude.from_ratio(1.0 + 0j, m22)


def transmission_from_stack(stack: SegmentStack, k: float) -> ScatteringAmplitude:
    """``t = 1/m22`` of the whole stack (includes the ``exp(-ik L)`` phase)."""
    return _amplitude_from_m22(stack_matrix(stack, k).entry(1, 1))


def reflection_from_stack(stack: SegmentStack, k: float) -> complex:
    """Left reflection amplitude ``r = -m21/m22``."""
    M = stack_matrix(stack, k)
    return complex(-M.mantissa[1, 0] / M.mantissa[1, 1])


def omega(unit: TransferMatrix, s: float, k: float) -> Scaled:
    """Chebyshev argument ``(m11 exp(iks) + m22 exp(-iks)) / 2`` for period ``s``."""
    m = unit.mantissa
    return Scaled(0.5 * complex(m[0, 0] * cmath.exp(1j * k * s) + m[1, 1] * cmath.exp(-1j * k * s)), unit.exp)


def chebyshev_u_pair(n: int, x: Scaled) -> tuple[Scaled, Scaled]:
    """``(U_{n-1}(x), U_{n-2}(x))`` for complex ``x`` by the three-term recurrence."""
    if n < 1:
        raise ValueError("n must be >= 1")
    x = Scaled.of(x)
    prev, cur = Scaled(0j, 0), Scaled(1.0 + 0j, 0)  # U_{-1}, U_0
    for _ in range(n - 1):
        prev, cur = cur, 2.0 * x * cur - prev
    return cur, prev


def periodic_transmission(unit: TransferMatrix, n: int, s: float, k: float) -> ScatteringAmplitude:
    """Transmission of ``n`` copies of ``unit`` with period ``s`` (cells at ``[j s, j s + w]``).

    ``t_n = exp(-ikns) / [m22 exp(-iks) U_{n-1}(Omega) - U_{n-2}(Omega)]``.
    """
    _check_k(k)
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    W = omega(unit, s, k)
    u1, u2 = chebyshev_u_pair(int(n), W)
    m22 = Scaled(complex(unit.mantissa[1, 1] * cmath.exp(-1j * k * s)), unit.exp)
    denom = m22 * u1 - u2
    if denom.log_abs() < math.log(1e-300):
        raise TransmissionOverflowError("transmission resonance overflow in periodic formula")
    return ScatteringAmplitude.from_ratio(cmath.exp(-1j * k * n * s), denom)


def unit_cell_matrix(cell: BarrierCell, k: float) -> TransferMatrix:
    """Two-barrier matrix of ``cell`` placed on ``[0, 2b]``."""
    return stack_matrix(SegmentStack.from_cell(cell, 1), k)


def batch_stack_matrices(V: np.ndarray, w: np.ndarray, x0: np.ndarray, k: Sequence[float]):
    """Vectorised products for ``S`` equally long stacks: arrays of shape ``(S, n)``.

    Returns ``(mantissas (S, 2, 2), exponents (S,))``.
    """
    V = np.ascontiguousarray(V, dtype=np.complex128)
    w = np.ascontiguousarray(w, dtype=np.float64)
    x0 = np.ascontiguousarray(x0, dtype=np.float64)
    k = np.ascontiguousarray(np.broadcast_to(np.asarray(k, dtype=np.float64), (V.shape[0],)))
    return _kernels.batch_stack_product(V, w, x0, k)
