"""Small-b series of ``g chi`` and the real-barrier limit of the layered system.

``g chi`` is odd in ``b``; its Taylor coefficients ``A_1 ... A_9`` are
polynomials in ``N`` whose ``N -> infinity`` limits (with ``L = 2 N b``
held fixed) reproduce the Maclaurin series of ``tanh(qL)``.  Consequently a
real barrier of height ``u`` and width ``L`` is the ``N -> infinity`` limit
of ``N`` PT cells of half-width ``L / 2N``.

The closed-form coefficients are evaluated exactly as quoted; the
independent check is :func:`numeric_taylor_extract`, a least-squares fit
of monomials to ``g chi(b)`` sampled on a circle in the complex ``b`` plane
(an orthogonal design, so the fit is perfectly conditioned).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import FitConditioningError
from .layered import gchi_raw, tau_layered_raw
from .model import require_tunneling
from .ptcell import inner_parameters
from .spm import square_barrier_time

#: Maclaurin coefficients of tanh(x) for x, x^3, ..., x^9
TANH_COEFFICIENTS = (
    Fraction(1),
    Fraction(-1, 3),
    Fraction(2, 15),
    Fraction(-17, 315),
    Fraction(62, 2835),
)

#: Limit coefficients as commonly quoted alongside the series; the last one
#: is half the true tanh coefficient (kept for auditing only).
QUOTED_LIMIT_COEFFICIENTS = (
    Fraction(1),
    Fraction(-1, 3),
    Fraction(2, 15),
    Fraction(-17, 315),
    Fraction(31, 2835),
)


@dataclass(frozen=True)
class SeriesCoefficients:
    """Odd Taylor coefficients ``A_1, A_3, ..., A_9`` of ``g chi`` in powers of ``b``."""

    a1: float
    a3: float
    a5: float
    a7: float
    a9: float
    n: int
    u: float
    v: float
    k: float

    def as_list(self) -> list[float]:
        return [self.a1, self.a3, self.a5, self.a7, self.a9]

    def partial_sum(self, b: float) -> float:
        return sum(a * b ** j for a, j in zip(self.as_list(), (1, 3, 5, 7, 9)))


def series_coefficients(u: float, v: float, k: float, n: int) -> SeriesCoefficients:
    """Quoted closed forms of ``A_1 ... A_9`` for ``N = n`` cells.

    With ``P = U+ + U-`` and ``M = U+ - U-`` (``P = 2k/rho``, ``M = 2 rho/k``)
    and ``c_m = cos(m phi)``.
    """
    p = inner_parameters(u, v, 1.0, k)
    rho, phi = p.rho, p.phi
    P = p.u_plus + p.u_minus
    M = p.u_plus - p.u_minus
    N = float(n)

    def c(m):
        return math.cos(m * phi)

    a1 = N * rho * (p.u_minus * math.cos(phi) ** 2 + p.u_plus * math.sin(phi) ** 2)
    a3 = -N * rho ** 3 / 6.0 * (8 * N ** 2 * P * c(2) - M * (4 * N ** 2 - 1 + (4 * N ** 2 + 1) * c(4)))
    a5 = N * rho ** 5 / 360.0 * (
        2 * P * (96 * N ** 4 - 5 * N ** 2 - 1)
        - M * c(2) * (288 * N ** 4 - 25 * N ** 2 - 8)
        + 2 * P * c(4) * (96 * N ** 4 + 5 * N ** 2 + 1)
        - M * c(6) * (96 * N ** 4 + 25 * N ** 2 + 8)
    )
    a7 = N * rho ** 7 / 15120.0 * (
        M * (9792 * N ** 6 - 1008 * N ** 4 - 161 * N ** 2 - 34)
        - 4 * P * c(2) * (4896 * N ** 6 - 168 * N ** 4 - 35 * N ** 2 - 10)
        + 4 * M * c(4) * (3264 * N ** 6 - 35 * N ** 2 - 16)
        - 4 * P * c(6) * (1632 * N ** 6 + 168 * N ** 4 + 35 * N ** 2 + 10)
        + M * c(8) * (3264 * N ** 6 + 1008 * N ** 4 + 301 * N ** 2 + 98)
    )
    a9 = N * rho ** 9 / 453600.0 * (
        4 * P * (119040 * N ** 8 - 6120 * N ** 6 - 1029 * N ** 4 - 215 * N ** 2 - 61)
        - 2 * M * c(2) * (396800 * N ** 8 - 28560 * N ** 6 - 5502 * N ** 4 - 1045 * N ** 2 - 268)
        + 40 * P * c(4) * (15872 * N ** 8 - 42 * N ** 4 - 15 * N ** 2 - 5)
        - M * c(6) * (396800 * N ** 8 + 28560 * N ** 6 + 1722 * N ** 4 - 655 * N ** 2 - 352)
        + 4 * P * c(8) * (39680 * N ** 8 + 6120 * N ** 6 + 1449 * N ** 4 + 365 * N ** 2 + 111)
        - M * c(10) * (79360 * N ** 8 + 28560 * N ** 6 + 9282 * N ** 4 + 2745 * N ** 2 + 888)
    )
    return SeriesCoefficients(a1, a3, a5, a7, a9, int(n), u, v, k)


def _prefactor(u: float, k: float) -> tuple[float, float]:
    q = require_tunneling(u, k)
    return (k * k - q * q) / (2.0 * k * q), q


def series_coefficient_limits(u: float, k: float, L: float, order: int = 9) -> list[float]:
    """``lim A_j b^j = f c_j (qL)^j`` for ``j = 1, 3, ..., order`` (``order <= 9``)."""
    if order < 1 or order > 9 or order % 2 == 0:
        raise ValueError("order must be odd and between 1 and 9")
    f, q = _prefactor(u, k)
    js = range(1, order + 1, 2)
    return [f * float(c) * (q * L) ** j for c, j in zip(TANH_COEFFICIENTS, js)]


def gchi_real_limit(u: float, k: float, L: float) -> float:
    """``((k^2 - q^2) / 2kq) tanh(qL)``."""
    f, q = _prefactor(u, k)
    return f * math.tanh(q * L)


@dataclass(frozen=True)
class TaylorFit:
    """Monomial coefficients ``c_0 .. c_D`` of a fitted polynomial in ``b``."""

    coefficients: np.ndarray
    radius: float
    condition: float
    residual: float

    def coefficient(self, j: int) -> float:
        return float(self.coefficients[j]) if j < len(self.coefficients) else 0.0

    def relative_even(self, upto: int = 8) -> float:
        """Largest ``|c_j| r^j`` over even ``j <= upto``, relative to the largest odd term."""
        lead = max(abs(self.coefficient(j)) * self.radius ** j for j in range(1, upto + 2, 2))
        evens = [abs(self.coefficient(j)) * self.radius ** j for j in range(0, upto + 1, 2)]
        return max(evens) / lead if lead > 0 else math.inf


def numeric_taylor_extract(
    func: Callable[[complex], complex],
    radius: float,
    degree: int = 31,
    n_samples: int | None = None,
    odd_only: bool = False,
    max_condition: float = 1e10,
) -> TaylorFit:
    """Least-squares polynomial fit of an analytic ``func`` sampled on ``|b| = radius``.

    ``func`` must accept complex arguments.  Samples are equally spaced on
    the circle, so the monomial design matrix (columns ``(b/radius)**j``) is
    orthogonal and its condition number is reported as a diagnostic; a
    condition above ``max_condition`` is refused.  Terms of degree between
    ``degree`` and ``n_samples`` are orthogonal to the fitted columns and do
    not contaminate them.  Returns real parts of the coefficients.

    >>> fit = numeric_taylor_extract(lambda b: 3.0 * b, 0.5, degree=5)
    >>> round(fit.coefficient(1), 12)
    3.0
    """
    if not radius > 0:
        raise ValueError("radius must be positive")
    m = n_samples or 2 * (degree + 1)
    if m <= degree:
        raise ValueError("need more samples than fitted coefficients")
    w = np.exp(2j * np.pi * (np.arange(m) + 0.5) / m)
    y = np.array([complex(func(radius * wi)) for wi in w])
    cols = np.arange(1, degree + 1, 2) if odd_only else np.arange(degree + 1)
    V = w[:, None] ** cols[None, :]
    cond = float(np.linalg.cond(V))
    if not cond <= max_condition:
        raise FitConditioningError(f"fit condition number {cond:.3g} exceeds {max_condition:.3g}")
    sol, *_ = np.linalg.lstsq(V, y, rcond=None)
    resid = float(np.max(np.abs(V @ sol - y)))
    full = np.zeros(degree + 1)
    full[cols] = sol.real / radius ** cols
    return TaylorFit(full, float(radius), cond, resid)


def gchi_complex(u: float, v: float, k: float, n: int, b: complex) -> complex:
    """``g chi`` continued to complex ``b`` (closed forms plus the U_m recurrence)."""
    p = inner_parameters(u, v, 1.0, k)
    c, s = math.cos(p.phi), math.sin(p.phi)
    a = b * p.rho * c
    be = b * p.rho * s
    xi = np.cosh(2 * a) * c * c + np.cos(2 * be) * s * s
    chi = 0.5 * (p.u_plus * s * np.sin(2 * be) + p.u_minus * c * np.sinh(2 * a))
    u_prev, u_cur = 0.0 + 0j, 1.0 + 0j  # U_{-1}, U_0
    for _ in range(int(n) - 1):
        u_prev, u_cur = u_cur, 2 * xi * u_cur - u_prev
    return u_cur / (xi * u_cur - u_prev) * chi


def convergence_radius(u: float, v: float, k: float, n: int) -> float:
    """Distance from ``b = 0`` to the nearest zero of ``T_N(xi(b))`` (small-b estimate).

    Near the origin ``xi ~ 1 + 2 rho^2 cos(2 phi) b^2`` so ``N arccosh(xi)``
    reaches ``i pi/2`` at ``|b| = pi / (4 N rho sqrt|cos 2 phi|)``.  The
    square root is floored at 0.1 to stay conservative near ``cos 2phi = 0``.
    """
    p = inner_parameters(u, v, 1.0, k)
    return math.pi / (4.0 * n * p.rho * max(math.sqrt(abs(math.cos(2 * p.phi))), 0.1))


def gchi_series_extract(u: float, v: float, k: float, n: int, degree: int = 31) -> TaylorFit:
    """Numeric Taylor coefficients of ``g chi(b)`` for ``N = n`` cells.

    Samples lie on a circle of half the estimated convergence radius, so the
    j-th coefficient is resolved to roughly ``eps * 2**j`` relative accuracy.
    """
    R = convergence_radius(u, v, k, n)
    return numeric_taylor_extract(lambda b: gchi_complex(u, v, k, n, b), 0.5 * R, degree=degree)


@dataclass(frozen=True)
class RecoveryResult:
    """Deviations of the N-cell system from the real barrier of width L."""

    ns: tuple
    gchi_deviation: tuple
    tau_deviation: tuple
    tau_values: tuple
    tau_square: float
    tau_extrapolated: float
    fitted_order: float

    @property
    def monotone(self) -> bool:
        g = np.asarray(self.gchi_deviation)
        t = np.asarray(self.tau_deviation)
        return bool(np.all(np.diff(g) < 0) and np.all(np.diff(t) < 0))


def extrapolate_power_law(ns: Sequence[float], values: Sequence[float]) -> tuple[float, float]:
    """Fit ``y_N = y_inf + C N^-p`` through the last three points.

    The exponent is solved for (not assumed); ``ns`` must be geometric over
    the last three entries.  Returns ``(y_inf, p)``.
    """
    n1, n2, n3 = (float(x) for x in ns[-3:])
    y1, y2, y3 = (float(x) for x in values[-3:])
    r = n2 / n1
    if not math.isclose(n3 / n2, r, rel_tol=1e-12):
        raise ValueError("the last three N values must form a geometric sequence")
    d12, d23 = y1 - y2, y2 - y3
    if d23 == 0.0 or d12 / d23 <= 0:
        return y3, math.nan
    p = math.log(d12 / d23) / math.log(r)
    return y3 - d23 / (r ** p - 1.0), p


def real_barrier_recovery(
    u: float,
    v: float,
    L: float,
    k: float,
    ns: Sequence[int] = (10, 100, 1000, 10000),
) -> RecoveryResult:
    """Compare ``N`` cells of half-width ``L/2N`` with a real barrier of width ``L``."""
    target_g = gchi_real_limit(u, k, L)
    tau_sq = square_barrier_time(u, L, k).tau
    gdev, tdev, taus = [], [], []
    for n in ns:
        b = L / (2.0 * n)
        gdev.append(abs(gchi_raw(u, v, k, int(n), b) - target_g))
        t = tau_layered_raw(u, v, k, int(n), b)
        taus.append(t)
        tdev.append(abs(t - tau_sq))
    if len(ns) >= 3:
        t_inf, p = extrapolate_power_law(ns, taus)
    else:
        t_inf, p = taus[-1], math.nan
    return RecoveryResult(tuple(ns), tuple(gdev), tuple(tdev), tuple(taus), tau_sq, t_inf, p)
