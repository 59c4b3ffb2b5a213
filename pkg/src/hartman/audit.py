"""Plain-text audit of quoted closed forms against independent numerical oracles.

Every entry records the quoted value, the oracle value, the relative
deviation and a verdict.  Nothing here corrects a quoted formula; mismatches
are reported as findings.
"""
from __future__ import annotations

import cmath
import dataclasses
import math
from dataclasses import dataclass, field
from typing import Iterable

from . import nonpt
from .model import BarrierCell
from .xfer import SegmentStack, transmission_from_stack
from .reallimit import (
    QUOTED_LIMIT_COEFFICIENTS,
    TANH_COEFFICIENTS,
    gchi_series_extract,
    series_coefficients,
)

DEFAULT_POINTS = ((2.0, 1.0, 1.0), (3.0, 0.7, 1.3), (2.5, 1.5, 0.8))
SERIES_POINTS = ((3.0, 0.7, 1.3), (2.5, 1.5, 0.8))


@dataclass(frozen=True)
class AuditEntry:
    section: str
    name: str
    quoted: complex
    oracle: complex
    tolerance: float
    note: str = ""

    @property
    def deviation(self) -> float:
        """Relative deviation; absolute when the oracle is (numerically) zero."""
        scale = abs(self.oracle)
        diff = abs(self.quoted - self.oracle)
        return diff if scale < 1e-12 else diff / scale

    @property
    def ok(self) -> bool:
        return math.isfinite(self.deviation) and self.deviation <= self.tolerance

    def line(self) -> str:
        status = "MATCH" if self.ok else "MISMATCH"
        return (
            f"  {self.name:<34s} quoted={_fmt(self.quoted)}  oracle={_fmt(self.oracle)}  "
            f"dev={self.deviation:.2e}  [{status}]" + (f"  {self.note}" if self.note else "")
        )


def _fmt(x) -> str:
    if isinstance(x, complex):
        return f"({x.real:.10e}{x.imag:+.10e}j)"
    return f"{x: .10e}"


@dataclass
class AuditReport:
    entries: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def add(self, *entries: AuditEntry) -> None:
        self.entries.extend(entries)

    def section(self, name: str) -> list:
        return [e for e in self.entries if e.section == name]

    def findings(self) -> list:
        return [e for e in self.entries if not e.ok]

    def render(self) -> str:
        out = ["AUDIT: quoted closed forms vs numerical oracles", "=" * 60]
        seen = []
        for e in self.entries:
            if e.section not in seen:
                seen.append(e.section)
        for sec in seen:
            out.append("")
            out.append(f"[{sec}]")
            out.extend(e.line() for e in self.section(sec))
        out.append("")
        out.append("[notes]")
        out.extend(f"  - {n}" for n in self.notes)
        out.append("")
        bad = self.findings()
        out.append(f"summary: {len(self.entries) - len(bad)} match, {len(bad)} mismatch")
        return "\n".join(out) + "\n"


def derivative_entries(points: Iterable = DEFAULT_POINTS, b: float = 1.0, tol: float = 1e-6) -> list:
    """The nine eps = 1 derivatives in both angle conventions, plus Q1, Q2, P."""
    entries = []
    for u, v, k in points:
        for conv in nonpt.CONVENTIONS:
            sec = f"eps=1 derivatives, {conv} angles"
            quoted = nonpt.quoted_derivatives(u, v, k, b, conv)
            oracle = nonpt.derivative_oracle(u, v, k, b, conv)
            for name in nonpt.DERIVATIVE_NAMES:
                entries.append(AuditEntry(sec, f"{name} @({u:g},{v:g},{k:g})", quoted[name], oracle[name], tol))
            if conv == "wavevector":
                # the mixed Q1 derivative lacks an overall prefactor; report the repaired value too
                r = nonpt.nonpt_params(u, v, 1.0, k).rho1
                fixed = quoted["d2Q1_deps_dk"] * v / (2 * k * k * r ** 12)
                entries.append(
                    AuditEntry(sec, f"d2Q1_deps_dk*v/(2k^2rho^12) @({u:g},{v:g},{k:g})", fixed,
                               oracle["d2Q1_deps_dk"], tol, "with restored prefactor")
                )
                q1, q2 = nonpt.q1_q2(u, v, 1.0, k)
                entries.append(AuditEntry("eps=1 values", f"Q1=4sin^2(phi1) @({u:g},{v:g},{k:g})", quoted.q1, q1, 1e-12))
                entries.append(AuditEntry("eps=1 values", f"Q2=2J1-sin(phi1) @({u:g},{v:g},{k:g})", quoted.q2, q2, 1e-12))
                entries.append(AuditEntry("eps=1 values", f"P=-J1-csc(phi1)/2 @({u:g},{v:g},{k:g})", quoted.p, -q2 / q1, 1e-12))
    return entries


def slope_entries(points: Iterable = DEFAULT_POINTS) -> list:
    entries = []
    for u, v, k in points:
        law = nonpt.slope_law(u, v, k)
        entries.append(AuditEntry("slope law", f"K1 @({u:g},{v:g},{k:g})", law.k1_coeff, law.k1_oracle, 1e-4))
        entries.append(AuditEntry("slope law", f"K0 @({u:g},{v:g},{k:g})", law.k0, law.k0_oracle, 1e-3))
    return entries


def series_entries(points: Iterable = SERIES_POINTS, ns=(1, 2, 5)) -> list:
    entries = []
    tol = {1: 1e-6, 3: 1e-6, 5: 1e-3, 7: 1e-3, 9: 1e-3}
    for u, v, k in points:
        for n in ns:
            quoted = series_coefficients(u, v, k, n)
            fit = gchi_series_extract(u, v, k, n)
            for j, a in zip((1, 3, 5, 7, 9), quoted.as_list()):
                entries.append(AuditEntry("series coefficients", f"A{j} @({u:g},{v:g},{k:g}) N={n}", a, fit.coefficient(j), tol[j]))
    return entries


def limit_entries() -> list:
    return [
        AuditEntry("limit coefficients", f"coefficient of x^{2 * i + 1}", float(q), float(t), 1e-15, "vs tanh Maclaurin")
        for i, (q, t) in enumerate(zip(QUOTED_LIMIT_COEFFICIENTS, TANH_COEFFICIENTS))
    ]


def convention_entries() -> list:
    """Checks of the J definition, the zeta sign and the factor 4 in t."""
    entries = []
    u, v, eps, b, k = 3.0, 0.7, 0.8, 0.6, 1.3
    cell = BarrierCell(u, v, b, eps)
    q = complex(nonpt.q_exact(cell, k).value())
    p = nonpt.nonpt_params(u, v, eps, k)
    entries.append(AuditEntry("conventions", "Q from A,B with J=rho/k+-k/rho",
                              complex(nonpt.phase_parts(cell, k, p).q.value()), q, 1e-12))
    alt = dataclasses.replace(
        p,
        j1_plus=p.rho1 / k ** 2 + k ** 2 / p.rho1,
        j1_minus=p.rho1 / k ** 2 - k ** 2 / p.rho1,
        j2_plus=p.rho2 / k ** 2 + k ** 2 / p.rho2,
        j2_minus=p.rho2 / k ** 2 - k ** 2 / p.rho2,
    )
    entries.append(AuditEntry("conventions", "Q from A,B with J=rho/k^2+-k^2/rho",
                              complex(nonpt.phase_parts(cell, k, alt).q.value()), q, 1e-12,
                              f"at k={k:g} (the two definitions agree only at k=1)"))
    for e in (1.2, 0.8):
        c = BarrierCell(2.0, 1.0, 30.0, e)
        exact = nonpt.phase_epsilon(c, 1.0)
        for sign, label in ((1, "alpha11-alpha22"), (-1, "alpha22-alpha11")):
            q1, q2 = nonpt.q1_q2(2.0, 1.0, e, 1.0)
            tz = math.tan(sign * nonpt.zeta(2.0, 1.0, e, 1.0, 30.0))
            lim = math.atan((q1 * tz - q2) / (q1 + q2 * tz))
            entries.append(AuditEntry("conventions", f"arctan P, zeta={label}, eps={e}, b=30",
                                      exact + nonpt.wrap_half_pi(lim - exact), exact, 1e-8,
                                      "large-b phase vs exact, reduced mod pi"))
    c = BarrierCell(2.0, 1.0, 1.0, 1.3)
    qv = complex(nonpt.q_exact(c, 1.0).value())
    xo = transmission_from_stack(SegmentStack.from_cell(c, 1), 1.0).t
    entries.append(AuditEntry("conventions", "t = exp(-2ikb)/Q", cmath.exp(-2j * c.b) / qv, xo, 1e-12))
    entries.append(AuditEntry("conventions", "t = 4 exp(-2ikb)/Q", 4 * cmath.exp(-2j * c.b) / qv, xo, 1e-12))
    return entries


def build_report(points: Iterable = DEFAULT_POINTS, b: float = 1.0, include_series: bool = True) -> AuditReport:
    points = tuple(points)
    rep = AuditReport()
    rep.add(*derivative_entries(points, b))
    rep.add(*slope_entries(points))
    if include_series:
        rep.add(*series_entries())
    rep.add(*limit_entries())
    rep.add(*convention_entries())
    rep.notes.extend(
        [
            "oracles: central finite differences with one Richardson level (derivatives, K0, K1); "
            "least-squares Taylor fit on a complex circle (series coefficients); exact scaled transfer "
            "matrices (phases, Q).",
            "angles: 'wavevector' uses k1 = rho1 exp(i phi1); 'decay' uses the angle of sqrt(u - k^2 + iv).",
            "K0/K1 oracle: intercept and slope of d^2 arctan(P)/(d eps dk) at eps = 1 through b = 25 and 35.",
            "A1 vanishes identically when 2k^2 = u (e.g. (2,1,1)); the series audit uses other points.",
            "tau_epsilon_expansion uses the oracle K0 by default.",
        ]
    )
    return rep


def audit_text(**kwargs) -> str:
    return build_report(**kwargs).render()


__all__ = ["AuditEntry", "AuditReport", "build_report", "audit_text", "DEFAULT_POINTS"]
