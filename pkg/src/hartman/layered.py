"""N identical PT cells back to back.

The layered denominator is ``H = (xi - i chi) U_{N-1}(xi) - U_{N-2}(xi)``
with Chebyshev polynomials of the second kind, so that ``Re H = T_N(xi)``
and ``t = exp(-ikL) / H``.  The transmission phase is
``Theta = arctan(g chi) - kL`` with ``g = U_{N-1}/T_N``.

Chebyshev values are computed from closed forms (trigonometric for
``|x| <= 1``, hyperbolic for ``|x| > 1``, a short series right next to
``x = 1``), so the cost is O(1) in N and the real-barrier limit
``N -> infinity`` stays accurate.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import BandEdgeError, PhasePoleError
from .model import LayeredSystem, ScatteringAmplitude, TunnelingTime, _check_k
from .ptcell import XiChiBundle, xi_chi_raw
from .scaled import LN2, Scaled


@dataclass(frozen=True)
class ChebyshevPair:
    """``U_{N-1}(x)``, ``U_{N-2}(x)`` and ``T_N(x)`` as scaled reals."""

    u_nm1_s: Scaled
    u_nm2_s: Scaled
    t_n_s: Scaled

    @property
    def u_nm1(self) -> float:
        return float(self.u_nm1_s.value())

    @property
    def u_nm2(self) -> float:
        return float(self.u_nm2_s.value())

    @property
    def t_n(self) -> float:
        return float(self.t_n_s.value())


def _series_u(m: int, d: float) -> float:
    """``U_m(1 + d)`` summed from its Taylor series about ``x = 1``."""
    if m < 0:
        return 0.0
    term = float(m + 1)
    total = term
    for j in range(m):
        term *= 2.0 * (m + j + 2) * (m - j) / ((2 * j + 2) * (2 * j + 3)) * d
        total += term
        if abs(term) <= 1e-18 * abs(total):
            break
    return total


def _series_t(n: int, d: float) -> float:
    """``T_n(1 + d)`` from its Taylor series about ``x = 1``."""
    term = 1.0
    total = 1.0
    for j in range(n):
        term *= 2.0 * (n + j) * (n - j) / ((2 * j + 1) * (2 * j + 2)) * d
        total += term
        if abs(term) <= 1e-18 * abs(total):
            break
    return total


def _hyperbolic(n: int, theta: float, log_sinh: float) -> ChebyshevPair:
    """Closed forms for ``x = cosh(theta) > 1``, scaled when ``n*theta`` is large."""
    if n * theta <= 300.0:
        sh = math.exp(log_sinh) if log_sinh < 700 else math.sinh(theta)
        sh = math.sinh(theta) if theta < 700 else sh
        u1 = math.sinh(n * theta) / sh
        u2 = math.sinh((n - 1) * theta) / sh
        return ChebyshevPair(Scaled(u1), Scaled(u2), Scaled(math.cosh(n * theta)))
    E = Scaled.exp_of(n * theta - LN2)
    u1 = E * Scaled.exp_of(-log_sinh) * (-math.expm1(-2.0 * n * theta))
    u2 = E * Scaled.exp_of(-theta - log_sinh) * (-math.expm1(-2.0 * (n - 1) * theta))
    t = E * (1.0 + math.exp(-2.0 * n * theta))
    return ChebyshevPair(u1, u2, t)


def chebyshev_eval(n: int, x, x_minus_1: float | None = None) -> ChebyshevPair:
    """Evaluate ``U_{n-1}``, ``U_{n-2}`` and ``T_n`` at ``x``.

    ``x`` is a float or a real :class:`Scaled` (for arguments beyond double
    range).  ``x_minus_1`` may supply ``x - 1`` without cancellation.

    >>> chebyshev_eval(5, 1.0).u_nm1
    5.0
    >>> round(chebyshev_eval(3, 0.5).t_n, 12)
    -1.0
    >>> round(chebyshev_eval(3, 2.0).u_nm1, 12)
    15.0
    """
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    n = int(n)
    if isinstance(x, Scaled) and x.exp != 0:
        X = float(x.mantissa.real if isinstance(x.mantissa, complex) else x.mantissa)
        if x.exp < 0:
            return chebyshev_eval(n, float(x.value()))
        sign = 1.0 if X > 0 else -1.0
        log_x = math.log(abs(X)) + x.exp * LN2
        pair = _hyperbolic(n, log_x + LN2, log_x)
        return _apply_parity(pair, n, sign)
    x = float(x.value()) if isinstance(x, Scaled) else float(x)
    d = (x - 1.0) if x_minus_1 is None else float(x_minus_1)
    if x < 0.0:
        return _apply_parity(chebyshev_eval(n, -x), n, -1.0)
    if abs(d) < 1e-6 and n * n * abs(d) <= 1.0:
        return ChebyshevPair(Scaled(_series_u(n - 1, d)), Scaled(_series_u(n - 2, d)), Scaled(_series_t(n, d)))
    if d > 0:
        s2 = d * (2.0 + d)  # sinh^2(theta)
        theta = math.log1p(d + math.sqrt(s2))
        return _hyperbolic(n, theta, 0.5 * math.log(s2))
    # |x| <= 1: x = cos(theta), theta = 2 asin(sqrt(-d/2)) is accurate near x = 1
    theta = 2.0 * math.asin(math.sqrt(min(1.0, -0.5 * d)))
    s = math.sin(theta)
    return ChebyshevPair(
        Scaled(math.sin(n * theta) / s),
        Scaled(math.sin((n - 1) * theta) / s),
        Scaled(math.cos(n * theta)),
    )


def _apply_parity(pair: ChebyshevPair, n: int, sign: float) -> ChebyshevPair:
    """``U_m(-x) = (-1)^m U_m(x)`` and ``T_n(-x) = (-1)^n T_n(x)``."""
    if sign > 0:
        return pair
    s1 = -1.0 if (n - 1) % 2 else 1.0
    s2 = -1.0 if (n - 2) % 2 else 1.0
    st = -1.0 if n % 2 else 1.0
    return ChebyshevPair(pair.u_nm1_s * s1, pair.u_nm2_s * s2, pair.t_n_s * st)


def _cheb_for_bundle(n: int, bnd: XiChiBundle) -> ChebyshevPair:
    if bnd.exp == 0:
        return chebyshev_eval(n, bnd.xi_m, bnd.xi_minus_1)
    return chebyshev_eval(n, Scaled(bnd.xi_m, bnd.exp))


@dataclass(frozen=True)
class LayeredPhase:
    """``Theta = arctan(g chi) - kL`` together with ``g`` and ``g chi``."""

    theta: float
    g: float
    gchi: float


def _hyperbolic_g(n: int, bnd: XiChiBundle):
    """``(g, dg/dxi)`` for ``xi = cosh(theta) > 1`` without cancellation.

    ``g = tanh(N theta)/sinh(theta)`` and
    ``dg/dxi = N sech^2(N theta)/sinh^2(theta) - tanh(N theta) cosh(theta)/sinh^3(theta)``,
    which equals ``N/(xi^2-1) - N g^2 - g xi/(xi^2-1)`` identically.
    Returns ``None`` outside the hyperbolic regime (or inside the series window).
    """
    if bnd.exp > 0:
        S = Scaled(bnd.xi_m, bnd.exp)  # sinh(theta) == xi to double precision here
        theta = math.log(bnd.xi_m) + bnd.exp * LN2 + LN2
    else:
        d = bnd.xi_minus_1
        if not (d > 0) or (d < 1e-6 and n * n * d <= 1.0):
            return None
        S = Scaled(math.sqrt(d * (2.0 + d)))
        theta = math.log1p(d + S.mantissa)
    xi = bnd.scaled("xi")
    e = math.exp(-2.0 * n * theta) if n * theta < 350 else 0.0
    tn = (1.0 - e) / (1.0 + e)
    sech2 = 4.0 * e / (1.0 + e) ** 2
    g = tn / S
    dg = n * sech2 / (S * S) - tn * xi / (S * S * S)
    return g, dg


def _g_scaled(n: int, bnd: XiChiBundle, ch: ChebyshevPair) -> Scaled:
    hyp = _hyperbolic_g(n, bnd)
    if hyp is not None:
        return hyp[0]
    if abs(ch.t_n_s).log_abs() < math.log(1e-14) + abs(ch.u_nm1_s).log_abs():
        raise PhasePoleError("T_N(xi) ~ 0: arctan(g chi) crosses its branch; refine the k-grid")
    return ch.u_nm1_s / ch.t_n_s


def _denominator(bnd: XiChiBundle, ch: ChebyshevPair, n: int) -> Scaled:
    """``H = (xi - i chi) U_{N-1} - U_{N-2}``; written as ``T_N (1 - i g chi)`` when xi > 1."""
    hyp = _hyperbolic_g(n, bnd)
    if hyp is None:
        return bnd.denominator * ch.u_nm1_s - ch.u_nm2_s
    gchi = hyp[0] * bnd.scaled("chi")
    return ch.t_n_s * (1.0 - 1j * complex(gchi.value()))


def layered_transmission(sys: LayeredSystem, k: float) -> ScatteringAmplitude:
    """``t = exp(-ikL) / [(xi - i chi) U_{N-1}(xi) - U_{N-2}(xi)]``."""
    _check_k(k)
    c = sys.cell
    bnd = xi_chi_raw(c.u, c.v, c.b, k)
    ch = _cheb_for_bundle(sys.n_repeats, bnd)
    return ScatteringAmplitude.from_ratio(cmath.exp(-1j * k * sys.length), _denominator(bnd, ch, sys.n_repeats))


def gchi_raw(u: float, v: float, k: float, n: int, b: float) -> float:
    """``g chi`` for any real ``b`` (no validation; used by series oracles)."""
    bnd = xi_chi_raw(u, v, b, k)
    ch = _cheb_for_bundle(n, bnd)
    return float((_g_scaled(n, bnd, ch) * bnd.scaled("chi")).value())


def layered_phase(sys: LayeredSystem, k: float) -> LayeredPhase:
    """``Theta = arctan(g chi) - kL`` (principal arctan) and ``g``."""
    _check_k(k)
    c = sys.cell
    bnd = xi_chi_raw(c.u, c.v, c.b, k)
    ch = _cheb_for_bundle(sys.n_repeats, bnd)
    g = _g_scaled(sys.n_repeats, bnd, ch)
    gchi = float((g * bnd.scaled("chi")).value())
    return LayeredPhase(math.atan(gchi) - k * sys.length, float(g.value()), gchi)


def tau_layered(sys: LayeredSystem, k: float) -> TunnelingTime:
    """Closed-form phase time of the N-cell system.

    ``tau_N = [g chi' + chi (N xi'/(xi^2-1) - N xi' g^2 - g xi xi'/(xi^2-1))] / (2k (1 + g^2 chi^2))``

    For ``xi > 1`` the bracket is evaluated in the equivalent
    ``theta = arccosh(xi)`` form (see :func:`_hyperbolic_g`).
    """
    _check_k(k)
    c = sys.cell
    N = sys.n_repeats
    bnd = xi_chi_raw(c.u, c.v, c.b, k)
    if bnd.exp == 0:
        xi2m1 = Scaled(bnd.xi_minus_1 * (bnd.xi_m + 1.0))
    else:
        x = bnd.scaled("xi")
        xi2m1 = x * x - 1.0
    if abs(xi2m1).log_abs() < math.log(1e-10):
        raise BandEdgeError("|xi^2 - 1| < 1e-10: band-edge singularity; perturb k")
    xi, chi = bnd.scaled("xi"), bnd.scaled("chi")
    xip, chip = bnd.scaled("xi_prime"), bnd.scaled("chi_prime")
    hyp = _hyperbolic_g(N, bnd)
    if hyp is not None:
        g, dg = hyp
        bracket = xip * dg
    else:
        ch = _cheb_for_bundle(N, bnd)
        g = _g_scaled(N, bnd, ch)
        bracket = N * xip / xi2m1 - N * xip * g * g - g * xi * xip / xi2m1
    num = g * chip + chi * bracket
    gchi = float((g * chi).value())
    return TunnelingTime(float(num.value()) / (2.0 * k * (1.0 + gchi * gchi)))


def tau_layered_raw(u: float, v: float, k: float, n: int, b: float) -> float:
    """Unvalidated ``tau_N`` (b > 0 still required physically)."""
    from .model import BarrierCell

    return tau_layered(LayeredSystem(BarrierCell(u, v, b), n), k).tau
