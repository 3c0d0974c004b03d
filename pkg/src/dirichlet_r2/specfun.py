"""Special functions on the strip used throughout: Riemann and Hurwitz zeta by
Euler-Maclaurin summation (with analytic s-derivatives) and complex log-gamma.

All routines accept scalars or numpy arrays and broadcast.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.special import bernoulli, factorial

# B_{2l} / (2l)! for l = 1..EM_TERMS
EM_TERMS = 30
_B = bernoulli(2 * EM_TERMS)
EM_COEFFS = np.array([_B[2 * l] / factorial(2 * l, exact=False) for l in range(1, EM_TERMS + 1)])
# head length is chosen so that |s + 2L| / (2 pi N) <= EM_RATIO
EM_RATIO = 0.6
EM_MIN_HEAD = 16

MAX_IMAG = 3.0e4

_STIRLING = np.array([_B[2 * j] / (2 * j * (2 * j - 1)) for j in range(1, 11)])


class PoleError(ZeroDivisionError):
    """Evaluation requested at the pole s = 1."""


def em_head_length(s) -> int:
    smax = float(np.max(np.abs(np.asarray(s) + 2 * EM_TERMS)))
    return max(EM_MIN_HEAD, math.ceil(smax / (2 * math.pi * EM_RATIO)))


def _check_domain(s: np.ndarray) -> None:
    if np.any(s == 1):
        raise PoleError("zeta has a pole at s = 1")
    if np.any(np.abs(s.imag) > MAX_IMAG):
        warnings.warn(f"|Im s| > {MAX_IMAG:g}: outside the validated range", RuntimeWarning, stacklevel=3)


def _pochhammer_logderivs(s: np.ndarray, n_factors: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Running product of (s+j), and sums of 1/(s+j), 1/(s+j)^2, for j < n_factors."""
    j = np.arange(n_factors)
    f = s[..., None] + j
    return np.cumprod(f, axis=-1), np.cumsum(1 / f, axis=-1), np.cumsum(1 / f**2, axis=-1)


def _em_tail(s: np.ndarray, x: float | np.ndarray, derivative: int) -> np.ndarray:
    """Euler-Maclaurin remainder of sum_{j>=N} (j+a)^{-s} at x = N + a,
    excluding the pole term x^{1-s}/(s-1)."""
    lx = np.log(x)
    base = np.exp(-s * lx)  # x^{-s}
    half = 0.5 * base * (-lx) ** derivative
    # T_l = c_l (s)_{2l-1} x^{-s-2l+1}
    P, S1, S2 = _pochhammer_logderivs(s, 2 * EM_TERMS - 1)
    idx = np.arange(1, EM_TERMS + 1)
    P = P[..., 2 * idx - 2]
    S1 = S1[..., 2 * idx - 2]
    S2 = S2[..., 2 * idx - 2]
    xpow = np.exp((1 - 2 * idx) * lx)
    if derivative == 0:
        poly = P
    elif derivative == 1:
        poly = P * (S1 - lx)
    else:
        poly = P * ((S1 - lx) ** 2 - S2)
    corr = np.sum(EM_COEFFS * poly * xpow, axis=-1) * base
    return half + corr


def _pole_term(s: np.ndarray, x: float | np.ndarray, derivative: int) -> np.ndarray:
    lx = np.log(x)
    g = np.exp((1 - s) * lx) / (s - 1)
    u = lx + 1 / (s - 1)
    if derivative == 0:
        return g
    if derivative == 1:
        return -g * u
    return g * (u**2 + 1 / (s - 1) ** 2)


def hurwitz_zeta(s, a: float = 1.0, derivative: int = 0):
    """Hurwitz zeta ``sum_{j>=0} (j+a)^{-s}`` or its first/second s-derivative.

    Euler-Maclaurin with a head of about ``|s|/(2 pi 0.6)`` terms and 30
    Bernoulli corrections; relative accuracy is around 1e-12 on
    ``0 < Re s <= 3``, ``|Im s| <= 3e4``.

    Args:
        s: complex scalar or array, ``s != 1``.
        a: shift in (0, 1].
        derivative: 0, 1 or 2.
    """
    if derivative not in (0, 1, 2):
        raise ValueError("derivative must be 0, 1 or 2")
    if not 0 < a <= 1:
        raise ValueError("a must lie in (0, 1]")
    s_arr = np.asarray(s, dtype=np.complex128)
    scalar = s_arr.ndim == 0
    s_arr = np.atleast_1d(s_arr)
    _check_domain(s_arr)
    N = em_head_length(s_arr)
    base = np.arange(N) + a
    lb = np.log(base)
    w = (-lb) ** derivative
    out = np.empty(s_arr.shape, dtype=np.complex128)
    flat_s = s_arr.ravel()
    flat_out = out.ravel()
    for lo in range(0, flat_s.size, 256):
        chunk = flat_s[lo : lo + 256]
        head = np.exp(-np.outer(chunk, lb)) @ w
        flat_out[lo : lo + 256] = head
    x = N + a
    out = flat_out.reshape(s_arr.shape) + _pole_term(s_arr, x, derivative) + _em_tail(s_arr, x, derivative)
    return out[0] if scalar else out


def zeta_em(s, derivative_order: int = 0):
    """Riemann zeta (or its first/second derivative) by Euler-Maclaurin."""
    return hurwitz_zeta(s, 1.0, derivative_order)


def loggamma(z):
    """Complex log-gamma for ``Re z > 0``: Stirling series after shifting
    ``|z|`` above 15 with the recurrence. Continuous in ``z`` on the right
    half-plane, so phase differences along vertical lines are meaningful."""
    z = np.asarray(z, dtype=np.complex128)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    if np.any(z.real <= 0):
        raise ValueError("loggamma here requires Re z > 0")
    shift = np.clip(np.ceil(15.0 - np.abs(z)), 0, None).astype(int)
    corr = np.zeros_like(z)
    for j in range(int(shift.max(initial=0))):
        m = shift > j
        corr[m] += np.log(z[m] + j)
    w = z + shift
    inv = 1 / w
    inv2 = inv * inv
    series = np.zeros_like(w)
    for c in _STIRLING[::-1]:
        series = series * inv2 + c
    out = (w - 0.5) * np.log(w) - w + 0.5 * math.log(2 * math.pi) + series * inv - corr
    return out[0] if scalar else out
