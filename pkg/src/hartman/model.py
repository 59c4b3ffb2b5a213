"""Domain types and the decay parametrisation shared by all closed forms.

Units: ``2m = hbar = 1`` so that the energy of a plane wave is ``E = k**2``
and a free particle moves at group velocity ``2k``.

The decay constant inside a barrier of height ``u + i v`` at wavenumber
``k`` is ``kappa = sqrt((u - k**2) + i v) = rho * exp(i phi)``.  The angle is
taken from the two-argument arctangent so that ``cos(2 phi) = (u-k**2)/rho**2``
holds for ``u < k**2`` as well.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import RegimeError, ZeroDecayError
from .scaled import Scaled


@dataclass(frozen=True)
class BarrierCell:
    """Barrier pair ``u + i v`` on ``[0, b]`` followed by ``u - i*epsilon*v`` on ``[b, 2b]``.

    ``epsilon == 1`` is the PT-symmetric cell.
    """

    u: float
    v: float
    b: float
    epsilon: float = 1.0

    def __post_init__(self):
        if not (self.b > 0 and math.isfinite(self.b)):
            raise ValueError(f"half-cell width b must be positive and finite, got {self.b!r}")
        if not self.v >= 0:
            raise ValueError(f"gain/loss strength v must be non-negative, got {self.v!r}")
        for name in ("u", "v", "epsilon"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def is_pt(self) -> bool:
        return self.epsilon == 1.0

    @property
    def potentials(self) -> tuple[complex, complex]:
        """Complex heights of the two halves (left, right)."""
        return complex(self.u, self.v), complex(self.u, -self.epsilon * self.v)

    def with_b(self, b: float) -> "BarrierCell":
        return BarrierCell(self.u, self.v, b, self.epsilon)


@dataclass(frozen=True)
class DecayParam:
    """Polar form ``kappa = rho * exp(i*phi)`` of the complex decay constant."""

    rho: float
    phi: float

    @property
    def kappa(self) -> complex:
        return cmath.rect(self.rho, self.phi)


@dataclass(frozen=True)
class LayeredSystem:
    """``n_repeats`` PT cells placed back to back; total extent ``L = 2*N*b``."""

    cell: BarrierCell
    n_repeats: int

    def __post_init__(self):
        if int(self.n_repeats) != self.n_repeats or self.n_repeats < 1:
            raise ValueError(f"n_repeats must be a positive integer, got {self.n_repeats!r}")
        if not self.cell.is_pt:
            raise ValueError("layered systems are built from PT-symmetric cells (epsilon = 1)")

    @property
    def length(self) -> float:
        return 2.0 * self.n_repeats * self.cell.b


@dataclass(frozen=True)
class ScatteringAmplitude:
    """Transmission amplitude ``t = magnitude * exp(i*theta)``.

    ``theta`` is the principal value in ``(-pi, pi]``; continuous phases over a
    k-grid are obtained with :func:`hartman.spm.unwrap_phase`.  ``log_magnitude``
    stays finite even when ``magnitude`` underflows to zero.
    """

    t: complex
    theta: float
    magnitude: float
    log_magnitude: float

    @classmethod
    def from_ratio(cls, numerator: complex, denominator: Scaled) -> "ScatteringAmplitude":
        """Build ``numerator / denominator`` where ``|numerator| == 1``."""
        denominator = Scaled.of(denominator)
        theta = cmath.phase(numerator * complex(denominator.mantissa).conjugate())
        log_mag = -denominator.log_abs()
        mag = math.exp(log_mag) if log_mag < 709.0 else math.inf
        return cls(t=cmath.rect(mag, theta), theta=theta, magnitude=mag, log_magnitude=log_mag)


@dataclass(frozen=True)
class TunnelingTime:
    """Phase time in natural units plus an error estimate (0 for closed forms)."""

    tau: float
    error: float = 0.0

    def __float__(self) -> float:
        return float(self.tau)


def _check_k(k: float) -> None:
    if not (k > 0 and math.isfinite(k)):
        raise ValueError(f"wavenumber k must be positive and finite, got {k!r}")


def decay_parametrization(u: float, v: float, k: float) -> DecayParam:
    """Return ``(rho, phi)`` with ``rho**2 * exp(2 i phi) = (u - k**2) + i v``.

    >>> p = decay_parametrization(2.0, 1.0, 1.0)
    >>> round(p.rho, 6), round(p.phi, 6)
    (1.189207, 0.392699)
    """
    _check_k(k)
    d = u - k * k
    if d == 0.0 and v == 0.0:
        raise ZeroDecayError("zero decay constant: u = k**2 and v = 0")
    rho = math.hypot(d, v) ** 0.5
    phi = 0.5 * math.atan2(v, d)
    return DecayParam(rho, phi)


def barrier_wavevector(V: complex, k: float) -> complex:
    """Principal ``sqrt(k**2 - V)`` (non-negative imaginary part)."""
    _check_k(k)
    K = cmath.sqrt(complex(k * k - complex(V).real, -complex(V).imag))
    if K.imag < 0 or (K.imag == 0 and K.real < 0):
        K = -K
    return K


def require_tunneling(u: float, k: float) -> float:
    """Return ``q = sqrt(u - k**2)`` or raise :class:`RegimeError`."""
    _check_k(k)
    if not k * k < u:
        raise RegimeError(f"out of tunneling regime: k**2 = {k*k!r} >= u = {u!r}")
    return math.sqrt(u - k * k)
