"""Hot loops: ordered products of rectangular-barrier transfer matrices.

Two interchangeable back ends are provided:

* ``*_numba`` -- scalar loops compiled with :func:`numba.njit`;
* ``*_numpy`` -- the same arithmetic vectorised over a batch of stacks.

The public names :func:`stack_product` and :func:`batch_stack_product` point
at the numba version unless numba is unavailable or the environment variable
``HARTMAN_DISABLE_NUMBA`` is set to a non-empty value other than ``0``.

Matrices are carried as a complex mantissa ``m`` (2x2) and an integer binary
exponent ``e``; the physical matrix is ``m * 2**e``.  Each barrier contributes
``2**n`` with ``n = floor(|Im(K w)| / ln 2)`` whenever ``|Im(K w)| > 300``, and
the running product is renormalised whenever its largest entry leaves
``[2**-256, 2**256]``.
"""
from __future__ import annotations

import cmath
import math
import os

import numpy as np

_flag = os.environ.get("HARTMAN_DISABLE_NUMBA", "")
_DISABLED = _flag not in ("", "0")

try:  # pragma: no cover - exercised implicitly
    if _DISABLED:
        raise ImportError("numba disabled by HARTMAN_DISABLE_NUMBA")
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]
        return lambda f: f


THRESHOLD = 300.0
LN2 = math.log(2.0)
RENORM_HI = 2.0 ** 256
RENORM_LO = 2.0 ** -256


# ---------------------------------------------------------------------------
# scalar back end
# ---------------------------------------------------------------------------
def _segment(V, w, x0, k):
    """Entries ``(a, b, c, d)`` and exponent of one barrier on ``[x0, x0 + w]``.

    Uses ``mu*sin = K**2 * (sin(Kw)/K) / k`` and ``sin/mu = k * sin(Kw)/K``,
    both even in ``K`` and finite at ``K = 0``.
    """
    K = cmath.sqrt(k * k - V)
    z = K * w
    y = abs(z.imag)
    n = 0
    if y > THRESHOLD:
        n = int(math.floor(y / LN2))
        sh = n * LN2
        ep = cmath.exp(1j * z - sh)
        em = cmath.exp(-1j * z - sh)
        c = 0.5 * (ep + em)
        s = (ep - em) / 2j
    else:
        c = cmath.cos(z)
        s = cmath.sin(z)
    if K == 0:
        s_over_K = w * (0.5 ** n) + 0j
    else:
        s_over_K = s / K
    mu_s = K * K * s_over_K / k
    imu_s = k * s_over_K
    Pp = 2.0 * c + 1j * (mu_s + imu_s)
    Pm = 2.0 * c - 1j * (mu_s + imu_s)
    S = 1j * (mu_s - imu_s)
    em_w = cmath.exp(-1j * k * w)
    ep_w = cmath.exp(1j * k * w)
    sh2 = cmath.exp(-2j * k * x0)
    a = 0.5 * em_w * Pp
    b = 0.5 * em_w * S * sh2
    cc = -0.5 * ep_w * S / sh2
    d = 0.5 * ep_w * Pm
    return a, b, cc, d, n


def _renorm(a, b, c, d, e):
    big = max(abs(a), abs(b), abs(c), abs(d))
    if big == 0.0 or (RENORM_LO <= big <= RENORM_HI) or not math.isfinite(big):
        return a, b, c, d, e
    sh = math.frexp(big)[1]
    f = math.ldexp(1.0, -sh)
    return a * f, b * f, c * f, d * f, e + sh


def _stack_product_py(V, w, x0, k):
    """Ordered product ``M_n ... M_1`` for one stack (scalar loop)."""
    a, b, c, d, e = 1.0 + 0j, 0j, 0j, 1.0 + 0j, 0
    for j in range(V.shape[0]):
        sa, sb, sc, sd, sn = _segment(V[j], w[j], x0[j], k)
        na = sa * a + sb * c
        nb = sa * b + sb * d
        nc = sc * a + sd * c
        nd = sc * b + sd * d
        a, b, c, d, e = _renorm(na, nb, nc, nd, e + sn)
    out = np.empty((2, 2), dtype=np.complex128)
    out[0, 0] = a
    out[0, 1] = b
    out[1, 0] = c
    out[1, 1] = d
    return out, e


def _batch_stack_product_py(V, w, x0, k):
    """Products for a batch of equally long stacks; arrays are ``(S, n)``."""
    S = V.shape[0]
    m = np.empty((S, 2, 2), dtype=np.complex128)
    e = np.empty(S, dtype=np.int64)
    for i in range(S):
        mi, ei = _stack_product_py(V[i], w[i], x0[i], k[i])
        m[i] = mi
        e[i] = ei
    return m, e


_segment_nb = njit(cache=True)(_segment)
_renorm_nb = njit(cache=True)(_renorm)


@njit(cache=True)
def _stack_product_nb(V, w, x0, k):
    a, b, c, d, e = 1.0 + 0j, 0j, 0j, 1.0 + 0j, 0
    for j in range(V.shape[0]):
        sa, sb, sc, sd, sn = _segment_nb(V[j], w[j], x0[j], k)
        na = sa * a + sb * c
        nb = sa * b + sb * d
        nc = sc * a + sd * c
        nd = sc * b + sd * d
        a, b, c, d, e = _renorm_nb(na, nb, nc, nd, e + sn)
    out = np.empty((2, 2), dtype=np.complex128)
    out[0, 0] = a
    out[0, 1] = b
    out[1, 0] = c
    out[1, 1] = d
    return out, e


@njit(cache=True)
def _batch_stack_product_nb(V, w, x0, k):
    S = V.shape[0]
    m = np.empty((S, 2, 2), dtype=np.complex128)
    e = np.empty(S, dtype=np.int64)
    for i in range(S):
        mi, ei = _stack_product_nb(V[i], w[i], x0[i], k[i])
        m[i] = mi
        e[i] = ei
    return m, e


# ---------------------------------------------------------------------------
# vectorised numpy back end
# ---------------------------------------------------------------------------
def _segments_numpy(V, w, x0, k):
    """Vectorised :func:`_segment`; all inputs broadcast to a common shape."""
    V = np.asarray(V, dtype=np.complex128)
    k = np.asarray(k, dtype=np.float64)
    K = np.sqrt(k * k - V)
    z = K * w
    y = np.abs(z.imag)
    n = np.where(y > THRESHOLD, np.floor(y / LN2), 0.0)
    sh = n * LN2
    with np.errstate(over="ignore", invalid="ignore"):
        ep = np.exp(1j * z - sh)
        em = np.exp(-1j * z - sh)
    c = 0.5 * (ep + em)
    s = (ep - em) / 2j
    Kz = K == 0
    s_over_K = np.where(Kz, w * np.exp2(-n), s / np.where(Kz, 1.0, K))
    mu_s = K * K * s_over_K / k
    imu_s = k * s_over_K
    em_w = np.exp(-1j * k * w)
    ep_w = np.exp(1j * k * w)
    sh2 = np.exp(-2j * k * x0)
    out = np.empty(np.shape(z) + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = 0.5 * em_w * (2.0 * c + 1j * (mu_s + imu_s))
    out[..., 0, 1] = 0.5 * em_w * 1j * (mu_s - imu_s) * sh2
    out[..., 1, 0] = -0.5 * ep_w * 1j * (mu_s - imu_s) / sh2
    out[..., 1, 1] = 0.5 * ep_w * (2.0 * c - 1j * (mu_s + imu_s))
    return out, n.astype(np.int64)


def _batch_stack_product_np(V, w, x0, k):
    V = np.atleast_2d(V)
    S, n = V.shape
    k = np.broadcast_to(np.asarray(k, dtype=np.float64), (S,))
    seg, segexp = _segments_numpy(V, w, x0, k[:, None])
    m = np.broadcast_to(np.eye(2, dtype=np.complex128), (S, 2, 2)).copy()
    e = np.zeros(S, dtype=np.int64)
    for j in range(n):
        m = np.matmul(seg[:, j], m)
        e += segexp[:, j]
        big = np.max(np.abs(m), axis=(1, 2))
        bad = (big > RENORM_HI) | ((big < RENORM_LO) & (big > 0))
        if np.any(bad):
            sh = np.frexp(big[bad])[1].astype(np.int64)
            m[bad] *= np.ldexp(1.0, -sh)[:, None, None]
            e[bad] += sh
    return m, e


def _stack_product_np(V, w, x0, k):
    m, e = _batch_stack_product_np(
        np.asarray(V)[None, :], np.asarray(w)[None, :], np.asarray(x0)[None, :], np.array([k])
    )
    return m[0], int(e[0])


if HAS_NUMBA:
    stack_product_numba = _stack_product_nb
    batch_stack_product_numba = _batch_stack_product_nb
else:  # pragma: no cover
    stack_product_numba = _stack_product_py
    batch_stack_product_numba = _batch_stack_product_py

stack_product_numpy = _stack_product_np
batch_stack_product_numpy = _batch_stack_product_np

BACKEND = "numba" if HAS_NUMBA else "numpy"
if HAS_NUMBA:
    def stack_product(V, w, x0, k):
        m, e = _stack_product_nb(V, w, x0, float(k))
        return m, int(e)

    batch_stack_product = _batch_stack_product_nb
else:  # pragma: no cover
    stack_product = _stack_product_np
    batch_stack_product = _batch_stack_product_np


def relative_det_error(m, e):
    """``|det(m 2**e) - 1|`` normalised by ``max(1, |m11 m22|, |m12 m21|)``.

    Works on a single ``(2, 2)`` mantissa or a batch ``(S, 2, 2)``.
    """
    m = np.asarray(m)
    e = np.asarray(e, dtype=np.float64)
    p = m[..., 0, 0] * m[..., 1, 1]
    q = m[..., 0, 1] * m[..., 1, 0]
    inv = np.exp2(-2.0 * e)  # the value "1" in mantissa units
    scale = np.maximum(np.maximum(np.abs(p), np.abs(q)), inv)
    return np.abs((p - q) - inv) / scale
