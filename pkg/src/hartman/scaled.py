"""Scaled-exponent arithmetic for quantities that outgrow double precision.

Opaque barriers produce factors like ``exp(2*alpha)`` with ``alpha`` in the
thousands.  A :class:`Scaled` number stores ``mantissa * 2**exp`` with an
integer exponent, so products and quotients of such factors stay exact in
the exponent and only the mantissa carries rounding error.

Below :data:`THRESHOLD` (a hyperbolic argument of 300) nothing is scaled and
every helper returns ordinary doubles with ``exp == 0``; ordinary-sized
problems therefore see bit-for-bit plain floating point arithmetic.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

Number = Union[float, complex]

THRESHOLD = 300.0
LN2 = math.log(2.0)

# mantissas are renormalised only when they leave [2**-256, 2**256]
_RENORM_HI = 2.0 ** 256
_RENORM_LO = 2.0 ** -256


def split_exponent(x: float) -> int:
    """Binary exponent ``n`` to factor out of ``exp(x)``; 0 below the threshold."""
    if abs(x) <= THRESHOLD:
        return 0
    return int(math.floor(abs(x) / LN2))


def _ldexp(m: Number, e: int) -> Number:
    """``m * 2**e`` for real or complex ``m`` with underflow to 0 and overflow to inf."""
    if isinstance(m, complex):
        return complex(_ldexp(m.real, e), _ldexp(m.imag, e))
    if m == 0.0 or e == 0:
        return m
    try:
        return math.ldexp(m, e)
    except OverflowError:
        return math.copysign(math.inf, m)


def _frexp_abs(m: Number) -> int:
    """Binary exponent of the largest component of ``m``."""
    a = max(abs(m.real), abs(m.imag)) if isinstance(m, complex) else abs(m)
    return math.frexp(a)[1]


@dataclass(frozen=True)
class Scaled:
    """A real or complex number ``mantissa * 2**exp``.

    >>> x = Scaled(3.0, 1000) * Scaled(2.0, -1000)
    >>> float(x)
    6.0
    >>> Scaled.exp_of(2000.0).log_abs()  # doctest: +ELLIPSIS
    2000.0...
    """

    mantissa: Number
    exp: int = 0

    # -- construction -----------------------------------------------------------
    @staticmethod
    def of(x: Union["Scaled", Number]) -> "Scaled":
        return x if isinstance(x, Scaled) else Scaled(x, 0)

    @staticmethod
    def exp_of(x: Number) -> "Scaled":
        """``exp(x)`` for real or complex ``x`` without overflow."""
        re = x.real
        n = split_exponent(re) if re > 0 else -split_exponent(re)
        if isinstance(x, complex):
            return Scaled(cmath.exp(x - n * LN2), n)
        return Scaled(math.exp(x - n * LN2), n)

    def normalized(self) -> "Scaled":
        m = self.mantissa
        a = max(abs(m.real), abs(m.imag)) if isinstance(m, complex) else abs(m)
        if a == 0.0 or (_RENORM_LO <= a <= _RENORM_HI) or not math.isfinite(a):
            return self
        e = _frexp_abs(m)
        return Scaled(_ldexp(m, -e), self.exp + e)

    # -- arithmetic -------------------------------------------------------------
    def _align(self, other: "Scaled"):
        if self.exp == other.exp:
            return self.mantissa, other.mantissa, self.exp
        if self.mantissa == 0:
            return 0.0 * other.mantissa, other.mantissa, other.exp
        if other.mantissa == 0:
            return self.mantissa, 0.0 * self.mantissa, self.exp
        if self.exp > other.exp:
            return self.mantissa, _ldexp(other.mantissa, other.exp - self.exp), self.exp
        return _ldexp(self.mantissa, self.exp - other.exp), other.mantissa, other.exp

    def __add__(self, other) -> "Scaled":
        other = Scaled.of(other)
        a, b, e = self._align(other)
        return Scaled(a + b, e).normalized()

    __radd__ = __add__

    def __sub__(self, other) -> "Scaled":
        other = Scaled.of(other)
        a, b, e = self._align(other)
        return Scaled(a - b, e).normalized()

    def __rsub__(self, other) -> "Scaled":
        return Scaled.of(other) - self

    def __neg__(self) -> "Scaled":
        return Scaled(-self.mantissa, self.exp)

    def __mul__(self, other) -> "Scaled":
        # normalising first keeps extreme mantissas from under/overflowing in the product
        self, other = self.normalized(), Scaled.of(other).normalized()
        return Scaled(self.mantissa * other.mantissa, self.exp + other.exp).normalized()

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Scaled":
        self, other = self.normalized(), Scaled.of(other).normalized()
        return Scaled(self.mantissa / other.mantissa, self.exp - other.exp).normalized()

    def __rtruediv__(self, other) -> "Scaled":
        return Scaled.of(other) / self

    def __pow__(self, n: int) -> "Scaled":
        if n != int(n) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        out = Scaled(1.0, 0)
        for _ in range(int(n)):
            out = out * self
        return out

    # -- conversion -------------------------------------------------------------
    def value(self) -> Number:
        """Plain float/complex; may be 0 (underflow) or inf (overflow)."""
        return _ldexp(self.mantissa, self.exp)

    def __float__(self) -> float:
        return float(self.value().real if isinstance(self.mantissa, complex) else self.value())

    def __complex__(self) -> complex:
        return complex(self.value())

    def __abs__(self) -> "Scaled":
        return Scaled(abs(self.mantissa), self.exp)

    @property
    def real(self) -> "Scaled":
        return Scaled(self.mantissa.real if isinstance(self.mantissa, complex) else self.mantissa, self.exp)

    @property
    def imag(self) -> "Scaled":
        return Scaled(self.mantissa.imag if isinstance(self.mantissa, complex) else 0.0, self.exp)

    def conjugate(self) -> "Scaled":
        m = self.mantissa
        return Scaled(m.conjugate() if isinstance(m, complex) else m, self.exp)

    def log_abs(self) -> float:
        """``log|x|`` computed from mantissa and exponent separately."""
        a = abs(self.mantissa)
        if a == 0.0:
            return -math.inf
        return math.log(a) + self.exp * LN2

    def angle(self) -> float:
        return cmath.phase(complex(self.mantissa))

    def is_zero(self) -> bool:
        return self.mantissa == 0


def scaled_cosh_sinh(x: float) -> tuple[float, float, int]:
    """Return ``(cosh(x)*2**-n, sinh(x)*2**-n, n)`` with ``n = split_exponent(x)``.

    For ``|x| <= THRESHOLD`` this is exactly ``(cosh x, sinh x, 0)``.
    """
    n = split_exponent(x)
    if n == 0:
        return math.cosh(x), math.sinh(x), 0
    ep = math.exp(abs(x) - n * LN2)
    em = math.exp(-abs(x) - n * LN2)
    return 0.5 * (ep + em), math.copysign(0.5 * (ep - em), x), n


def scaled_cos_sin(z: complex) -> tuple[complex, complex, int]:
    """``(cos z * 2**-n, sin z * 2**-n, n)`` for complex ``z`` with ``n`` set by ``|Im z|``."""
    n = split_exponent(z.imag)
    if n == 0:
        return cmath.cos(z), cmath.sin(z), 0
    shift = n * LN2
    ep = cmath.exp(1j * z - shift)
    em = cmath.exp(-1j * z - shift)
    return 0.5 * (ep + em), (ep - em) / 2j, n
