"""Closed forms for a single PT-symmetric cell ``u + iv`` | ``u - iv``.

With ``kappa = rho exp(i phi)``, ``alpha = b rho cos(phi)``,
``beta = b rho sin(phi)`` and ``U(+/-) = k/rho +/- rho/k``, the cell's
denominator is ``m22 exp(-2ikb) = xi - i chi`` with

    xi  = cosh(2 alpha) cos^2(phi) + cos(2 beta) sin^2(phi)
    chi = [U+ sin(phi) sin(2 beta) + U- cos(phi) sinh(2 alpha)] / 2

(the first line is an algebraically equivalent, shorter form of the
two-term expression usually quoted).  All hyperbolic factors are carried
with a shared binary exponent so that ``b`` may be arbitrarily large.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import RegimeError
from .model import BarrierCell, ScatteringAmplitude, TunnelingTime, _check_k, decay_parametrization
from .scaled import LN2, Scaled, scaled_cosh_sinh, split_exponent


@dataclass(frozen=True)
class InnerParams:
    """The (rho, phi, alpha, beta, U+-) parametrisation and its k-derivatives."""

    rho: float
    phi: float
    alpha: float
    beta: float
    u_plus: float
    u_minus: float
    rho_prime: float
    phi_prime: float
    alpha_prime: float
    beta_prime: float
    u_plus_prime: float
    u_minus_prime: float


def inner_parameters(u: float, v: float, b: float, k: float) -> InnerParams:
    """Inner parametrisation; ``b`` may be any real number (used by Taylor oracles)."""
    p = decay_parametrization(u, v, k)
    rho, phi = p.rho, p.phi
    c, s = math.cos(phi), math.sin(phi)
    d = u - k * k
    rho_p = -k * d / rho ** 3
    phi_p = k * v / rho ** 4
    up = k / rho + rho / k
    um = k / rho - rho / k
    common = 1.0 / rho - k * rho_p / rho ** 2
    extra = rho_p / k - rho / (k * k)
    return InnerParams(
        rho=rho,
        phi=phi,
        alpha=b * rho * c,
        beta=b * rho * s,
        u_plus=up,
        u_minus=um,
        rho_prime=rho_p,
        phi_prime=phi_p,
        alpha_prime=b * (rho_p * c - rho * phi_p * s),
        beta_prime=b * (rho_p * s + rho * phi_p * c),
        u_plus_prime=common + extra,
        u_minus_prime=common - extra,
    )


@dataclass(frozen=True)
class XiChiBundle:
    """xi, chi and their k-derivatives, all equal to ``mantissa * 2**exp``.

    ``xi_minus_1`` is ``xi - 1`` evaluated without cancellation (only
    meaningful when ``exp == 0``; otherwise it is ``inf``).
    """

    xi_m: float
    chi_m: float
    xi_prime_m: float
    chi_prime_m: float
    exp: int
    xi_minus_1: float
    inner: InnerParams

    def _v(self, m):
        return float(Scaled(m, self.exp).value())

    @property
    def xi(self) -> float:
        return self._v(self.xi_m)

    @property
    def chi(self) -> float:
        return self._v(self.chi_m)

    @property
    def xi_prime(self) -> float:
        return self._v(self.xi_prime_m)

    @property
    def chi_prime(self) -> float:
        return self._v(self.chi_prime_m)

    # convenience passthroughs
    def __getattr__(self, name):
        inner = object.__getattribute__(self, "inner")
        if hasattr(inner, name):
            return getattr(inner, name)
        raise AttributeError(name)

    def scaled(self, name: str) -> Scaled:
        return Scaled(getattr(self, name + "_m"), self.exp)

    @property
    def denominator(self) -> Scaled:
        """``xi - i chi`` as a scaled complex number."""
        return Scaled(complex(self.xi_m, -self.chi_m), self.exp)


def xi_chi_raw(u: float, v: float, b: float, k: float) -> XiChiBundle:
    """Unchecked evaluation for any real ``b`` (negative ``b`` allowed)."""
    p = inner_parameters(u, v, b, k)
    c, s = math.cos(p.phi), math.sin(p.phi)
    c2, s2 = c * c, s * s
    ch2a, sh2a, n = scaled_cosh_sinh(2.0 * p.alpha)
    f = math.ldexp(1.0, -n)  # weight of the bounded (trigonometric) terms
    cos2b, sin2b = math.cos(2 * p.beta), math.sin(2 * p.beta)
    sin2phi = math.sin(2 * p.phi)
    xi = ch2a * c2 + cos2b * s2 * f
    chi = 0.5 * (p.u_plus * s * sin2b * f + p.u_minus * c * sh2a)
    xi_p = (
        2 * p.alpha_prime * c2 * sh2a
        - 2 * p.beta_prime * s2 * sin2b * f
        + p.phi_prime * sin2phi * (cos2b * f - ch2a)
    )
    chi_p = 0.5 * s * (
        p.u_plus_prime * sin2b * f + 2 * p.beta_prime * p.u_plus * cos2b * f - p.phi_prime * p.u_minus * sh2a
    ) + 0.5 * c * (
        p.u_minus_prime * sh2a + 2 * p.alpha_prime * p.u_minus * ch2a + p.phi_prime * p.u_plus * sin2b * f
    )
    if n == 0:
        xm1 = 2 * c2 * math.sinh(p.alpha) ** 2 - 2 * s2 * math.sin(p.beta) ** 2
    else:
        xm1 = math.inf
    return XiChiBundle(xi, chi, xi_p, chi_p, n, xm1, p)


def _require_pt(cell: BarrierCell) -> None:
    if not cell.is_pt:
        raise ValueError("closed forms of this module require a PT-symmetric cell (epsilon = 1)")


def xi_chi(cell: BarrierCell, k: float) -> XiChiBundle:
    """Full bundle (values and k-derivatives) for a PT cell."""
    _require_pt(cell)
    _check_k(k)
    return xi_chi_raw(cell.u, cell.v, cell.b, k)


def xi_chi_derivatives(cell: BarrierCell, k: float) -> tuple[float, float]:
    """``(xi', chi')``; see :func:`xi_chi` for the scaled representation."""
    bnd = xi_chi(cell, k)
    return bnd.xi_prime, bnd.chi_prime


def unit_transmission(cell: BarrierCell, k: float) -> ScatteringAmplitude:
    """``t = exp(-2ikb) / (xi - i chi)``."""
    bnd = xi_chi(cell, k)
    return ScatteringAmplitude.from_ratio(cmath.exp(-2j * k * cell.b), bnd.denominator)


def unit_phase(cell: BarrierCell, k: float) -> float:
    """``arctan2(chi, xi)``: phase of ``t exp(2ikb)`` in ``(-pi, pi]``."""
    bnd = xi_chi(cell, k)
    return math.atan2(bnd.chi_m, bnd.xi_m)


def tau_from_bundle(bnd: XiChiBundle, k: float) -> float:
    num = bnd.xi_m * bnd.chi_prime_m - bnd.chi_m * bnd.xi_prime_m
    den = bnd.xi_m * bnd.xi_m + bnd.chi_m * bnd.chi_m
    return num / den / (2.0 * k)


def tau_unit(cell: BarrierCell, k: float) -> TunnelingTime:
    """``tau = (xi chi' - chi xi') / (2k (xi^2 + chi^2))``."""
    return TunnelingTime(tau_from_bundle(xi_chi(cell, k), k))


@dataclass(frozen=True)
class AsymptoticForms:
    """Large-b forms of xi, chi, xi', chi' sharing the exponent ``exp``."""

    xi_m: float
    chi_m: float
    xi_prime_m: float
    chi_prime_m: float
    exp: int

    def ratio_to(self, bnd: XiChiBundle, name: str) -> float:
        """``asymptotic / exact`` for one of xi, chi, xi_prime, chi_prime."""
        a = Scaled(getattr(self, name + "_m"), self.exp)
        e = Scaled(getattr(bnd, name + "_m"), bnd.exp)
        return float((a / e).value())


def asymptotic_xi_chi(cell: BarrierCell, k: float) -> AsymptoticForms:
    """Dominant ``exp(2 alpha)`` terms of xi, chi, xi', chi'."""
    _require_pt(cell)
    _check_k(k)
    p = inner_parameters(cell.u, cell.v, cell.b, k)
    c, s = math.cos(p.phi), math.sin(p.phi)
    n = split_exponent(2 * p.alpha)
    e2a = math.exp(2 * p.alpha - n * LN2)
    return AsymptoticForms(
        xi_m=0.5 * e2a * c * c,
        chi_m=0.25 * p.u_minus * e2a * c,
        xi_prime_m=e2a * (p.alpha_prime * c * c - 0.5 * p.phi_prime * math.sin(2 * p.phi)),
        chi_prime_m=0.25 * e2a * (c * (p.u_minus_prime + 2 * p.alpha_prime * p.u_minus) - p.u_minus * p.phi_prime * s),
        exp=n,
    )


def tau_infinity(u: float, v: float, k: float) -> TunnelingTime:
    """Opaque limit ``(U-' cos phi + phi' U- sin phi) / (k (4 cos^2 phi + U-^2))``.

    >>> tau_infinity(2.0, 0.0, 1.0).tau
    1.0
    """
    _check_k(k)
    if not k * k < u:
        raise RegimeError(f"out of tunneling regime: k**2 = {k*k!r} >= u = {u!r}")
    p = inner_parameters(u, v, 1.0, k)
    c, s = math.cos(p.phi), math.sin(p.phi)
    num = p.u_minus_prime * c + p.phi_prime * p.u_minus * s
    return TunnelingTime(num / (k * (4 * c * c + p.u_minus ** 2)))


def eta_limit(u: float, v: float, k: float) -> float:
    """Opaque limit of ``chi/xi``: ``(U-/2) sec(phi)``."""
    p = inner_parameters(u, v, 1.0, k)
    return 0.5 * p.u_minus / math.cos(p.phi)
