"""The epsilon-deformed cell ``u + iv`` | ``u - i eps v`` (PT symmetric only at eps = 1).

Conventions
-----------
The barrier wavevectors are written ``k1 = rho1 exp(i phi1)`` and
``k2 = rho2 exp(-i phi2)`` (``phi = pi/2 + decay angle``), with

    rho1**4 = (u - k**2)**2 + v**2,      rho2**4 = (u - k**2)**2 + eps**2 v**2.

``alpha_ij = b rho_i cos(phi_j)`` are the trigonometric arguments and
``beta_ij = b rho_i sin(phi_j)`` the hyperbolic ones.  With
``J_i(+/-) = rho_i/k +/- k/rho_i`` the transmission is

    t = 4 exp(-2ikb) / Q,       Q = (A1 - A2) + i (B1 - B2),

so ``Q/4`` generalises ``xi - i chi`` and the phase (free flight removed) is
``Phi = -arg Q``.  For large ``b`` the phase tends to ``arctan P`` with

    P = (Q1 tan(zeta) - Q2) / (Q1 + Q2 tan(zeta)),   zeta = alpha_11 - alpha_22,

and the opaque tunneling time becomes affine in ``b`` whenever eps != 1:
``tau ~ tau_inf + (eps - 1) (K0 + K1 b) / (2k)``.

Besides the exact quantities this module evaluates a set of quoted closed
forms (:func:`quoted_derivatives`, :func:`quoted_k0`, :func:`quoted_k1`);
each is paired with a finite-difference oracle so that :mod:`hartman.audit`
can report how the two compare.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable


from .errors import DegeneratePhaseError, RegimeError, ZeroDecayError
from .model import BarrierCell, ScatteringAmplitude, TunnelingTime, _check_k, barrier_wavevector
from .ptcell import tau_infinity
from .scaled import Scaled, scaled_cos_sin, scaled_cosh_sinh
from .spm import phase_time, richardson_derivative

HALF_PI = 0.5 * math.pi

#: angle conventions accepted by the quoted-formula evaluators
CONVENTIONS = ("wavevector", "decay")


# ---------------------------------------------------------------------------
# parameters
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class NonPTParams:
    """Polar data of the two barrier wavevectors and the ratio combinations."""

    rho1: float
    phi1: float
    rho2: float
    phi2: float
    decay_phi1: float
    decay_phi2: float
    h_plus: float
    h_minus: float
    g_plus: float
    g_minus: float
    j1_plus: float
    j1_minus: float
    j2_plus: float
    j2_minus: float
    k: float

    @property
    def k1(self) -> complex:
        return cmath.rect(self.rho1, self.phi1)

    @property
    def k2(self) -> complex:
        return cmath.rect(self.rho2, -self.phi2)


def nonpt_params(u: float, v: float, epsilon: float, k: float) -> NonPTParams:
    """Polar parametrisation of ``k1 = sqrt(k^2 - u - iv)`` and ``k2 = sqrt(k^2 - u + i eps v)``.

    ``phi1, phi2`` are the wavevector angles; ``decay_phi1, decay_phi2`` are
    the angles of the decay constants ``sqrt(u - k^2 + i v)`` etc.

    >>> p = nonpt_params(2.0, 1.0, 1.5, 1.0)
    >>> round(p.rho2, 6)
    1.342675
    """
    _check_k(k)
    d = u - k * k
    if d == 0 and v == 0:
        raise ZeroDecayError("u == k**2 and v == 0: the decay constant vanishes")
    if d == 0 and epsilon * v == 0:
        raise ZeroDecayError("u == k**2 and eps*v == 0: the second decay constant vanishes")
    rho1 = math.sqrt(math.hypot(d, v))
    rho2 = math.sqrt(math.hypot(d, epsilon * v))
    dphi1 = 0.5 * math.atan2(v, d)
    dphi2 = 0.5 * math.atan2(epsilon * v, d)
    r12 = rho1 * rho2
    return NonPTParams(
        rho1=rho1,
        phi1=dphi1 + HALF_PI,
        rho2=rho2,
        phi2=dphi2 + HALF_PI,
        decay_phi1=dphi1,
        decay_phi2=dphi2,
        h_plus=r12 / (k * k) + (k * k) / r12,
        h_minus=r12 / (k * k) - (k * k) / r12,
        g_plus=rho1 / rho2 + rho2 / rho1,
        g_minus=rho1 / rho2 - rho2 / rho1,
        j1_plus=rho1 / k + k / rho1,
        j1_minus=rho1 / k - k / rho1,
        j2_plus=rho2 / k + k / rho2,
        j2_minus=rho2 / k - k / rho2,
        k=k,
    )


# ---------------------------------------------------------------------------
# exact transmission
# ---------------------------------------------------------------------------
def _p_s(K: complex, k: float, b: float):
    """``(P-, S)`` of one barrier as scaled mantissas sharing exponent ``n``.

    ``P- = 2 cos Kb - i (mu + 1/mu) sin Kb`` and ``S = i (mu - 1/mu) sin Kb``
    with ``mu = K/k``; written through ``sin(Kb)/K`` so that ``K -> 0`` is
    harmless.
    """
    c, s, n = scaled_cos_sin(K * b)
    sinc = s / K if K != 0 else complex(b * math.ldexp(1.0, -n))
    mu_s = K * K * sinc / k  # mu sin Kb
    s_mu = k * sinc  # sin Kb / mu
    return 2.0 * c - 1j * (mu_s + s_mu), 1j * (mu_s - s_mu), n


def q_exact(cell: BarrierCell, k: float) -> Scaled:
    """``Q = P1- P2- - S1 S2`` (so that ``t = 4 exp(-2ikb) / Q``) in scaled form."""
    _check_k(k)
    v1, v2 = cell.potentials
    p1, s1, n1 = _p_s(barrier_wavevector(v1, k), k, cell.b)
    p2, s2, n2 = _p_s(barrier_wavevector(v2, k), k, cell.b)
    return Scaled(p1 * p2 - s1 * s2, n1 + n2)


def nonpt_transmission(cell: BarrierCell, k: float) -> ScatteringAmplitude:
    """``t = 4 exp(-2ikb) / Q`` for any ``epsilon``.

    >>> from hartman.ptcell import unit_transmission
    >>> c = BarrierCell(2.0, 1.0, 1.0)
    >>> abs(nonpt_transmission(c, 1.0).t - unit_transmission(c, 1.0).t) < 1e-14
    True
    """
    q = q_exact(cell, k) / 4.0
    return ScatteringAmplitude.from_ratio(cmath.exp(-2j * k * cell.b), q)


# ---------------------------------------------------------------------------
# real / imaginary decomposition
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class PhaseParts:
    """``Q = (A1 - A2) + i (B1 - B2)`` and its trig/hyperbolic ingredients.

    ``a1, a2, b1, b2`` and ``w1 ... z2`` are mantissas; their values are
    ``mantissa * 2**exp``.  ``alpha`` and ``beta`` map ``"ij"`` to
    ``b rho_i cos(phi_j)`` and ``b rho_i sin(phi_j)``.
    """

    a1: float
    a2: float
    b1: float
    b2: float
    w1: float
    w2: float
    x1: float
    x2: float
    y1: float
    y2: float
    z1: float
    z2: float
    exp: int
    alpha: dict = field(repr=False)
    beta: dict = field(repr=False)
    params: NonPTParams = field(repr=False)

    @property
    def q(self) -> Scaled:
        return Scaled(complex(self.a1 - self.a2, self.b1 - self.b2), self.exp)

    @property
    def phase(self) -> float:
        """``-arg Q`` in ``(-pi, pi]``: the phase of ``t exp(2ikb)``."""
        return math.atan2(self.b2 - self.b1, self.a1 - self.a2)

    @property
    def phi_epsilon(self) -> float:
        """Principal ``arctan((B2 - B1) / (A1 - A2))`` (equals :attr:`phase` modulo pi)."""
        den = self.a1 - self.a2
        if den == 0:
            return math.copysign(HALF_PI, self.b2 - self.b1)
        return math.atan((self.b2 - self.b1) / den)

    def value(self, name: str) -> float:
        """Unscaled value of one of the mantissa fields."""
        return float(Scaled(getattr(self, name), self.exp).value())


def phase_parts(cell: BarrierCell, k: float, params: NonPTParams | None = None) -> PhaseParts:
    """Real/imaginary decomposition of ``Q`` built from the ``w, x, y, z`` products.

    ``params`` overrides :func:`nonpt_params` (used to audit alternative
    definitions of the ratio combinations).
    """
    p = nonpt_params(cell.u, cell.v, cell.epsilon, k) if params is None else params
    b = cell.b
    r = (p.rho1, p.rho2)
    ph = (p.phi1, p.phi2)
    alpha = {f"{i+1}{j+1}": b * r[i] * math.cos(ph[j]) for i in range(2) for j in range(2)}
    beta = {f"{i+1}{j+1}": b * r[i] * math.sin(ph[j]) for i in range(2) for j in range(2)}
    a11, a22 = alpha["11"], alpha["22"]
    ca1, sa1, ca2, sa2 = math.cos(a11), math.sin(a11), math.cos(a22), math.sin(a22)
    ch1, sh1, n1 = scaled_cosh_sinh(beta["11"])
    ch2, sh2, n2 = scaled_cosh_sinh(beta["22"])
    w1 = ca2 * ch1 * ch2 * sa1 - ca1 * sa2 * sh1 * sh2
    w2 = ca1 * ca2 * ch2 * sh1 + ch1 * sa1 * sa2 * sh2
    x1 = ca1 * ch1 * ch2 * sa2 - ca2 * sa1 * sh1 * sh2
    x2 = -ch2 * sa1 * sa2 * sh1 - ca1 * ca2 * ch1 * sh2
    y1 = ch1 * ch2 * sa1 * sa2 + ca1 * ca2 * sh1 * sh2
    y2 = ca1 * ch2 * sa2 * sh1 - ca2 * ch1 * sa1 * sh2
    z1 = ca1 * ca2 * ch1 * ch2 + sa1 * sa2 * sh1 * sh2
    z2 = -ca2 * ch2 * sa1 * sh1 + ca1 * ch1 * sa2 * sh2
    c1, s1, c2, s2 = math.cos(p.phi1), math.sin(p.phi1), math.cos(p.phi2), math.sin(p.phi2)
    cm, sm = math.cos(p.phi1 - p.phi2), math.sin(p.phi1 - p.phi2)
    cp, sp = math.cos(p.phi1 + p.phi2), math.sin(p.phi1 + p.phi2)
    hp, hm, gp, gm = p.h_plus, p.h_minus, p.g_plus, p.g_minus
    A1 = (
        4 * z1
        + 2 * (x2 * p.j2_plus * c2 - x1 * p.j2_minus * s2)
        + 2 * (w1 * p.j1_minus * s1 + w2 * p.j1_plus * c1)
        - y1 * (hp * cm + gp * cp)
        + y2 * (hm * sm + gm * sp)
    )
    B1 = (
        4 * z2
        - 2 * (x1 * p.j2_plus * c2 + x2 * p.j2_minus * s2)
        - 2 * (w1 * p.j1_plus * c1 - w2 * p.j1_minus * s1)
        - y1 * (hm * sm + gm * sp)
        - y2 * (hp * cm + gp * cp)
    )
    A2 = y2 * (hm * sm - gm * sp) - y1 * (hp * cm - gp * cp)
    B2 = -y2 * (hp * cm - gp * cp) - y1 * (hm * sm - gm * sp)
    n = n1 + n2
    tiny = math.ldexp(1e-300, -n) if n < 2000 else 0.0
    if abs(A1 - A2) < tiny and abs(B2 - B1) < tiny:
        raise DegeneratePhaseError("both A1 - A2 and B2 - B1 are below 1e-300")
    return PhaseParts(A1, A2, B1, B2, w1, w2, x1, x2, y1, y2, z1, z2, n, alpha, beta, p)


def phase_epsilon(cell: BarrierCell, k: float) -> float:
    """``Phi_eps = -arg Q`` in ``(-pi, pi]``."""
    return phase_parts(cell, k).phase


def tau_epsilon_numeric(cell: BarrierCell, k: float, h: float | None = None) -> TunnelingTime:
    """``(1/2k) dPhi_eps/dk`` by Richardson-extrapolated finite differences.

    The free-flight phase ``2kb`` is removed exactly as for the PT cell.
    """
    return phase_time(lambda kk: nonpt_transmission(cell, kk), k, 2.0 * cell.b, h)


# ---------------------------------------------------------------------------
# opaque (large b) limit
# ---------------------------------------------------------------------------
def _angles(u: float, v: float, epsilon: float, k: float, convention: str = "wavevector"):
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    p = nonpt_params(u, v, epsilon, k)
    if convention == "wavevector":
        return p.rho1, p.phi1, p.rho2, p.phi2
    return p.rho1, p.decay_phi1, p.rho2, p.decay_phi2


def q1_q2(u: float, v: float, epsilon: float, k: float, convention: str = "wavevector") -> tuple[float, float]:
    """The b-independent pair ``(Q1, Q2)`` of the large-b phase.

    ``Q1 = 2 + J1+ cos phi1 - J2+ cos phi2 - G+ cos(phi1 + phi2)`` and
    ``Q2 = J1- sin phi1 + J2- sin phi2 - G- sin(phi1 + phi2)``.
    """
    r1, p1, r2, p2 = _angles(u, v, epsilon, k, convention)
    gp, gm = r1 / r2 + r2 / r1, r1 / r2 - r2 / r1
    q1 = 2 + (r1 / k + k / r1) * math.cos(p1) - (r2 / k + k / r2) * math.cos(p2) - gp * math.cos(p1 + p2)
    q2 = (r1 / k - k / r1) * math.sin(p1) + (r2 / k - k / r2) * math.sin(p2) - gm * math.sin(p1 + p2)
    return q1, q2


def zeta(u: float, v: float, epsilon: float, k: float, b: float, convention: str = "wavevector") -> float:
    """``zeta = alpha_11 - alpha_22 = b (rho1 cos phi1 - rho2 cos phi2)``."""
    r1, p1, r2, p2 = _angles(u, v, epsilon, k, convention)
    return b * (r1 * math.cos(p1) - r2 * math.cos(p2))


def largeb_p(u: float, v: float, epsilon: float, k: float, b: float, convention: str = "wavevector") -> float:
    """``P = (Q1 tan zeta - Q2) / (Q1 + Q2 tan zeta)``."""
    q1, q2 = q1_q2(u, v, epsilon, k, convention)
    tz = math.tan(zeta(u, v, epsilon, k, b, convention))
    return (q1 * tz - q2) / (q1 + q2 * tz)


def largeb_phase_limit(cell: BarrierCell, k: float, b: float | None = None) -> float:
    """Opaque-limit phase ``arctan P`` (principal branch).

    ``b`` defaults to ``cell.b``.  The difference to the exact phase,
    reduced modulo pi, decays like ``exp(-2 beta)``.
    """
    b = cell.b if b is None else b
    return math.atan(largeb_p(cell.u, cell.v, cell.epsilon, k, b))


def wrap_half_pi(x: float) -> float:
    """Reduce an angle modulo pi into ``[-pi/2, pi/2)``."""
    return (x + HALF_PI) % math.pi - HALF_PI


# ---------------------------------------------------------------------------
# derivatives at eps = 1: quoted closed forms and oracle
# ---------------------------------------------------------------------------
#: names of the nine eps = 1 derivatives, in report order
DERIVATIVE_NAMES = (
    "dalpha_dk",
    "dQ1_dk",
    "dQ2_dk",
    "dalpha_deps",
    "dQ1_deps",
    "dQ2_deps",
    "d2alpha_deps_dk",
    "d2Q1_deps_dk",
    "d2Q2_deps_dk",
)


def _quoted_forms(u: float, v: float, k: float, b: float, convention: str) -> dict:
    r, p, _, _ = _angles(u, v, 1.0, k, convention)
    s, c = math.sin(p), math.cos(p)
    a = k * k - u
    k2, r2 = k * k, r * r
    inner = 2 * k2 * r ** 4 * (k2 + r2)
    mix = r2 * (v * v * (2 * k2 + u) + u * a * a)
    tail = k2 * (v * v * (u - 6 * k2) + u * a * a)
    return {
        "dalpha_dk": 0.0,
        "dQ1_dk": 4 * k * v * v / r ** 6,
        "dQ2_dk": 2 * (k2 + r2) * s * (u * a - v * v) / (k2 * r ** 5) + 2 * v * (r2 - k2) * c / r ** 5,
        "dalpha_deps": -b * v * v / (2 * math.sqrt(2) * r2) / math.sqrt(r2 - a),
        "dQ1_deps": v / (2 * k * r ** 5) * (v * (k2 - r2) * c - a * s * (k2 + 4 * k * r * c + r2)),
        "dQ2_deps": v / (2 * k * r ** 5) * ((k2 - r2) * a * c + v * (k2 + r2) * s + 2 * k * v * v / r),
        "d2alpha_deps_dk": b * k * v / (2 * r ** 7) * (s * (a * a - v * v) + 2 * v * a * c),
        "d2Q1_deps_dk": (
            r ** 3 * v * c * (-6 * k ** 6 + 2 * k ** 4 * (r2 + 3 * u) + k2 * r2 * (r2 - 2 * u) + r ** 6)
            - 4 * k ** 3 * r ** 4 * v * a * math.cos(2 * p)
            + 4 * k ** 3 * r ** 4 * math.sin(2 * p) * (a * a - v * v)
            + r ** 3 * s * (inner - mix + tail)
        ),
        "d2Q2_deps_dk": v / (2 * k2 * r ** 14) * (
            4 * k ** 3 * v * v * a * (a * a + 2 * r ** 4 + v * v)
            + r ** 5 * v * s * (-6 * k ** 6 + k ** 4 * (6 * u - 2 * r2) + k2 * r2 * (r2 + 2 * u) - r ** 6)
            - r ** 5 * c * (2 * k2 * r ** 4 * (k2 - r2) + mix + tail)
        ),
    }


@dataclass(frozen=True)
class DerivativeBundle:
    """Nine eps = 1 derivatives plus ``Q1, Q2, P`` at eps = 1.

    ``p`` is ``None`` and ``degenerate`` is set when ``sin(phi1) = 0`` (v = 0),
    where ``P(eps=1) = -J1- csc(phi1) / 2`` is singular.
    """

    values: dict
    q1: float
    q2: float
    p: float | None
    convention: str
    degenerate: bool = False

    def __getitem__(self, name: str) -> float:
        return self.values[name]


def quoted_derivatives(u: float, v: float, k: float, b: float = 1.0, convention: str = "wavevector") -> DerivativeBundle:
    """Evaluate the quoted eps = 1 closed forms of the nine derivatives.

    ``Q1 = 4 sin^2 phi1``, ``Q2 = 2 J1- sin phi1`` and ``P = -J1- csc(phi1)/2``
    accompany them.  These are quoted forms, not verified ones; see
    :func:`derivative_oracle` and :mod:`hartman.audit`.
    """
    _check_k(k)
    if not k * k < u:
        raise RegimeError(f"out of tunneling regime: k**2 = {k*k!r} >= u = {u!r}")
    r, p, _, _ = _angles(u, v, 1.0, k, convention)
    s = math.sin(p)
    jm = r / k - k / r
    degenerate = v == 0 or abs(s) < 1e-300
    if degenerate:
        return DerivativeBundle({}, 4 * s * s, 2 * jm * s, None, convention, True)
    vals = _quoted_forms(u, v, k, b, convention)
    return DerivativeBundle(vals, 4 * s * s, 2 * jm * s, -0.5 * jm / s, convention, False)


def _mixed(f: Callable[[float, float], float], k: float, e: float, h: float) -> float:
    """Central mixed difference with one Richardson level (error O(h^4))."""

    def d(hh):
        return (f(k + hh, e + hh) - f(k + hh, e - hh) - f(k - hh, e + hh) + f(k - hh, e - hh)) / (4 * hh * hh)

    d1, d2 = d(h), d(0.5 * h)
    return d2 + (d2 - d1) / 3.0


def derivative_oracle(u: float, v: float, k: float, b: float = 1.0, convention: str = "wavevector") -> dict:
    """Finite-difference values of the nine derivatives from the general-eps ``Q1, Q2, zeta``."""

    def q1(kk, e):
        return q1_q2(u, v, e, kk, convention)[0]

    def q2(kk, e):
        return q1_q2(u, v, e, kk, convention)[1]

    def al(kk, e):
        return zeta(u, v, e, kk, b, convention)

    h1 = 1e-3 * min(k, 1.0)
    hm = 2e-3 * min(k, 1.0)
    out = {}
    for name, f in (("alpha", al), ("Q1", q1), ("Q2", q2)):
        out[f"d{name}_dk"] = richardson_derivative(lambda kk: f(kk, 1.0), k, h1)[0]
        out[f"d{name}_deps"] = richardson_derivative(lambda e: f(k, e), 1.0, h1)[0]
        out[f"d2{name}_deps_dk"] = _mixed(f, k, 1.0, hm)
    return {n: out[n] for n in DERIVATIVE_NAMES}


# ---------------------------------------------------------------------------
# slope law
# ---------------------------------------------------------------------------
def quoted_k1(u: float, v: float, k: float, convention: str = "wavevector") -> float:
    """``K1 = (k v / 2 rho^7) [((k^2 - u)^2 - v^2) sin phi + 2 (k^2 - u) v cos phi]``."""
    r, p, _, _ = _angles(u, v, 1.0, k, convention)
    a = k * k - u
    return k * v / (2 * r ** 7) * (math.sin(p) * (a * a - v * v) + 2 * v * a * math.cos(p))


def quoted_k0(u: float, v: float, k: float, convention: str = "wavevector") -> float:
    """Quoted ``K0 = v csc^2 / (2 k^3 rho^13 [J^2 csc^2 + 4]^2) (C1 + ... + C5 - C6)``."""
    if v == 0:
        raise DegeneratePhaseError("K0 is singular at v = 0 (csc phi1)")
    r, p, _, _ = _angles(u, v, 1.0, k, convention)
    s, c = math.sin(p), math.cos(p)
    a = k * k - u
    J = r / k - k / r
    cot, csc = c / s, 1 / s
    r4 = a * a + v * v
    C1 = 2 * k ** 3 * v * cot * r4 * (-J ** 2 - 2 * math.cos(2 * p) + 2) * cot * (
        (k * k - r * r) * a * cot + v * (k * k + r * r) + 4 * k * r * v * c
    )
    C2 = 8 * J * k ** 3 * v * cot * r4 * (4 * k * r * a * c + (k * k + r * r) * a - v * (k * k - r * r) * cot)
    bq = (k * k + r * r) * s * (u * a - v * v) + k * k * v * (r * r - k * k) * c
    C3 = r * r * csc ** 2 * (2 - 0.5 * J ** 2 * csc ** 2) * bq * (
        r * v * (k * k - r * r) * c - r * a * s * (k * k + 4 * k * r * c + r * r)
    )
    C4 = 2 * J * r * r * csc ** 3 * bq * (r * (k * k - r * r) * a * c + r * v * s * (k * k + 4 * k * r * c + r * r))
    C5 = 2 * J * k * r * csc * (0.25 * J ** 2 * csc ** 2 + 1) * (
        r ** 3 * v * c * (-6 * k ** 6 + 2 * k ** 4 * (r * r + 3 * u) + k * k * (r ** 4 - 2 * r * r * u) + r ** 6)
        - 4 * k ** 3 * v * a * math.cos(2 * p) * r4
        + r ** 3 * s * (
            k ** 6 * u
            - k ** 4 * (-2 * r ** 4 + 2 * u * u + r * r * u + 6 * v * v)
            - r * r * u * (u * u + v * v)
            + k * k * (2 * r ** 6 + u ** 3 + 2 * r * r * u * u + u * v * v - 2 * r * r * v * v)
            + 8 * k ** 3 * r * c * (k ** 4 - 2 * k * k * u + u * u - v * v)
        )
    )
    C6 = 4 * k * r * (0.25 * J ** 2 * csc ** 2 + 1) * (
        -r ** 3 * c * (
            k ** 6 * u
            + k ** 4 * (2 * r ** 4 - 2 * u * u + r * r * u - 6 * v * v)
            + k * k * (-2 * r ** 6 + u ** 3 - 2 * r * r * u * u + u * v * v + 2 * r * r * v * v)
            + r * r * u * (u * u + v * v)
        )
        + v * (
            4 * k ** 3 * v * math.cos(2 * p) * r4
            - r ** 3 * s * (6 * k ** 6 + k ** 4 * (2 * r * r - 6 * u) - k * k * (r ** 4 + 2 * r * r * u) + 16 * k ** 3 * r * a * c + r ** 6)
        )
    )
    pref = v * csc ** 2 / (2 * k ** 3 * r ** 13 * (J ** 2 * csc ** 2 + 4) ** 2)
    return pref * (C1 + C2 + C3 + C4 + C5 - C6)


def mixed_phase_derivative(u: float, v: float, k: float, b: float, h: float = 2e-3) -> float:
    """``F(b) = d^2 arctan P / (d eps dk)`` at eps = 1 by mixed finite differences."""

    def f(kk, e):
        return math.atan(largeb_p(u, v, e, kk, b))

    return _mixed(f, k, 1.0, h * min(k, 1.0))


def slope_oracle(u: float, v: float, k: float, b_values=(25.0, 35.0)) -> tuple[float, float]:
    """``(K0, K1)`` as intercept and slope of ``F(b)`` through two large ``b``."""
    b0, b1 = b_values
    f0 = mixed_phase_derivative(u, v, k, b0)
    f1 = mixed_phase_derivative(u, v, k, b1)
    k1 = (f1 - f0) / (b1 - b0)
    return f0 - k1 * b0, k1


@dataclass(frozen=True)
class SlopeLaw:
    """Coefficients of ``tau ~ tau_inf + (eps - 1)(K0 + K1 b)/(2k)``.

    ``k0``/``k1_coeff`` are the quoted closed forms, ``k0_oracle``/``k1_oracle``
    the finite-difference values.  ``degenerate`` is set at ``v = 0`` where
    ``K1 = 0`` and ``K0`` is undefined (``nan``).
    """

    k0: float
    k1_coeff: float
    tau_inf: float
    k0_oracle: float
    k1_oracle: float
    degenerate: bool = False


def slope_law(u: float, v: float, k: float) -> SlopeLaw:
    """Quoted and oracle slope-law coefficients at ``(u, v, k)``.

    >>> slope_law(2.0, 0.0, 1.0).k1_coeff
    0.0
    """
    tau_inf = tau_infinity(u, v, k).tau
    if v == 0:
        return SlopeLaw(math.nan, 0.0, tau_inf, math.nan, 0.0, True)
    k0o, k1o = slope_oracle(u, v, k)
    return SlopeLaw(quoted_k0(u, v, k), quoted_k1(u, v, k), tau_inf, k0o, k1o)


def tau_epsilon_expansion(
    u: float, v: float, k: float, epsilon: float, b: float, k0_source: str = "oracle"
) -> TunnelingTime:
    """First-order opaque-limit time ``tau_inf + (eps - 1)(K0 + K1 b)/(2k)``.

    ``K1`` is the closed form; ``K0`` comes from the finite-difference oracle
    unless ``k0_source="quoted"``.  The returned ``error`` is a budget, not a
    bound: ``(eps - 1)^2 (1 + |K0| + |K1| b)/(2k) + exp(-2 alpha)`` with
    ``alpha`` the smaller opacity exponent of the two barriers.
    """
    if k0_source not in ("oracle", "quoted"):
        raise ValueError("k0_source must be 'oracle' or 'quoted'")
    tau_inf = tau_infinity(u, v, k).tau
    if epsilon == 1.0 or v == 0:
        k0 = k1 = 0.0
    else:
        k1 = quoted_k1(u, v, k)
        k0 = slope_oracle(u, v, k)[0] if k0_source == "oracle" else quoted_k0(u, v, k)
    d = epsilon - 1.0
    tau = tau_inf + d * (k0 + k1 * b) / (2 * k)
    p = nonpt_params(u, v, epsilon, k)
    alpha = b * min(p.rho1 * math.cos(p.decay_phi1), p.rho2 * math.cos(p.decay_phi2))
    err = d * d * (1 + abs(k0) + abs(k1) * b) / (2 * k) + math.exp(-2 * alpha)
    return TunnelingTime(tau, err)


__all__ = [
    "NonPTParams",
    "PhaseParts",
    "SlopeLaw",
    "DerivativeBundle",
    "DERIVATIVE_NAMES",
    "nonpt_params",
    "q_exact",
    "nonpt_transmission",
    "phase_parts",
    "phase_epsilon",
    "tau_epsilon_numeric",
    "q1_q2",
    "zeta",
    "largeb_p",
    "largeb_phase_limit",
    "wrap_half_pi",
    "quoted_derivatives",
    "derivative_oracle",
    "quoted_k0",
    "quoted_k1",
    "mixed_phase_derivative",
    "slope_oracle",
    "slope_law",
    "tau_epsilon_expansion",
]
