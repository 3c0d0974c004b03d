"""Closed-form two-point correlation of zeros of a Dirichlet L-function with a
primitive character mod k, at height E on the critical line.

    R2(eps) = dbar(E)^2 + R2_diag(eps) + R2_off(eps)

The formulas depend on the character only through its modulus k. Infinite
prime products are cut at ``prime_cutoff`` and completed with a tail estimate
from the prime number theorem (density 1/log x), which reduces the truncation
error from O(1/(P log P)) to the size of pi(x) - li(x) fluctuations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import exp1

from .arith import factorize, sieve_primes
from .specfun import zeta_em

DEFAULT_PRIME_CUTOFF = 10**5
MIN_PRIME_CUTOFF = 10**3
TERM_FLOOR = 1e-16
COMPONENTS = ("diag", "off", "off_r0", "total", "gue_reference")
_FOUR_PI2 = 4 * math.pi**2


class SingularPointError(ValueError):
    """Evaluation at eps = 0 where |zeta(1 + i eps)|^2 has a double pole."""


@dataclass(frozen=True)
class CorrelationParams:
    E: float
    k: int
    eps_grid: tuple[float, ...]
    prime_cutoff: int = DEFAULT_PRIME_CUTOFF
    m_cutoff: int | None = None

    def __post_init__(self):
        grid = np.asarray(self.eps_grid, dtype=float)
        if not np.all(np.isfinite(grid)):
            raise ValueError("eps grid must be finite")
        if np.any(np.diff(grid) < 0):
            raise ValueError("eps grid must be sorted ascending")
        if self.prime_cutoff < MIN_PRIME_CUTOFF:
            raise ValueError(f"prime_cutoff must be >= {MIN_PRIME_CUTOFF}")

    @property
    def dbar(self) -> float:
        return mean_density(self.E, self.k)


@dataclass
class CorrelationCurve:
    params: CorrelationParams
    component: str
    values: np.ndarray
    normalization: str = "raw"
    tail_estimates: dict = field(default_factory=dict)

    @property
    def eps(self) -> np.ndarray:
        return np.asarray(self.params.eps_grid, dtype=float)

    @property
    def x(self) -> np.ndarray:
        return self.eps * self.params.dbar

    def csv_rows(self) -> list[str]:
        E, k = self.params.E, self.params.k
        return [
            f"{e:.12g},{x:.12g},{v:.15g},{self.component},{E:.12g},{k}"
            for e, x, v in zip(self.eps, self.x, self.values)
        ]


def mean_density(E: float, k: int) -> float:
    """dbar(E) = log(k E / 2 pi) / (2 pi)."""
    if k * E <= 2 * math.pi:
        raise ValueError(f"mean density needs k E > 2 pi (k={k}, E={E})")
    return math.log(k * E / (2 * math.pi)) / (2 * math.pi)


def gue_r2(x):
    """1 - (sin(pi x)/(pi x))^2; 0 at x = 0."""
    x = np.asarray(x, dtype=float)
    out = 1.0 - np.sinc(x) ** 2
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=8)
def _primes(cutoff: int) -> tuple[np.ndarray, np.ndarray]:
    p = sieve_primes(int(cutoff)).primes.astype(np.float64)
    return p, np.log(p)


def _prime_divisors(k: int) -> list[int]:
    return list(factorize(int(k)).primes)


def _eps_array(eps) -> tuple[np.ndarray, bool]:
    arr = np.asarray(eps, dtype=float)
    return np.atleast_1d(arr), arr.ndim == 0


def _check_nonzero(eps: np.ndarray) -> None:
    if np.any(eps == 0):
        raise SingularPointError("eps = 0 is a double pole of |zeta(1 + i eps)|^2")


def _cos_sum(eps: np.ndarray, freqs: np.ndarray, coefs: np.ndarray, derivative: int) -> np.ndarray:
    """sum_j coefs_j d^n/deps^n cos(eps freqs_j), chunked over eps."""
    out = np.empty(eps.size)
    step = max(1, 4_000_000 // max(freqs.size, 1))
    for lo in range(0, eps.size, step):
        ph = np.outer(eps[lo : lo + step], freqs)
        if derivative == 0:
            out[lo : lo + step] = np.cos(ph) @ coefs
        elif derivative == 1:
            out[lo : lo + step] = -np.sin(ph) @ (coefs * freqs)
        else:
            out[lo : lo + step] = -np.cos(ph) @ (coefs * freqs**2)
    return out


@lru_cache(maxsize=16)
def _phi_diag_terms(prime_cutoff: int, m_cutoff: int | None) -> tuple[np.ndarray, np.ndarray]:
    """Frequencies m log p and coefficients 2(1-m)/(m^2 p^m) of log Phi_diag."""
    p, lp = _primes(prime_cutoff)
    freqs, coefs = [], []
    m = 2
    while m_cutoff is None or m <= m_cutoff:
        c = 2.0 * (1 - m) / (m * m) * np.exp(-m * lp)
        keep = np.abs(c) >= TERM_FLOOR
        if not keep.any():
            break
        freqs.append(m * lp[keep])
        coefs.append(c[keep])
        m += 1
    if not freqs:
        return np.zeros(0), np.zeros(0)
    return np.concatenate(freqs), np.concatenate(coefs)


def _tail_integral(a: np.ndarray, U: float, weight: int) -> np.ndarray:
    """int_U^inf u^(weight-1) e^{-a u} du for weight 0 (E1), 1, 2."""
    if weight == 0:
        return exp1(a * U)
    if weight == 1:
        return np.exp(-a * U) / a
    return np.exp(-a * U) * (U / a + 1 / a**2)


def _phi_diag_tail(eps: np.ndarray, prime_cutoff: int, derivative: int, m_max: int) -> np.ndarray:
    """Prime-number-theorem estimate of the p > cutoff part of log Phi_diag:
    sum_{p > P} p^{-m} e^{i m eps log p} ~ int_{log P}^inf e^{-(m-1-i m eps) u} du/u."""
    U = math.log(prime_cutoff)
    out = np.zeros(eps.size)
    for m in range(2, min(m_max, 4) + 1):
        a = (m - 1) - 1j * m * eps
        c = 2.0 * (1 - m) / (m * m)
        out += c * np.real((1j * m) ** derivative * _tail_integral(a, U, derivative))
    return out


def log_phi_diag(eps, prime_cutoff: int = DEFAULT_PRIME_CUTOFF, m_cutoff: int | None = None,
                 derivative: int = 0, tail: bool = True):
    """log Phi_diag(eps) = 2 sum_p sum_{m>=2} (1-m)/(m^2 p^m) cos(m eps log p),
    or its first/second eps-derivative."""
    e, scalar = _eps_array(eps)
    freqs, coefs = _phi_diag_terms(int(prime_cutoff), m_cutoff)
    out = _cos_sum(e, freqs, coefs, derivative) if freqs.size else np.zeros(e.size)
    if tail and (m_cutoff is None or m_cutoff >= 2):
        out = out + _phi_diag_tail(e, int(prime_cutoff), derivative, m_cutoff or 4)
    return float(out[0]) if scalar else out


def phi_diag(eps, prime_cutoff: int = DEFAULT_PRIME_CUTOFF, m_cutoff: int | None = None, tail: bool = True):
    return np.exp(log_phi_diag(eps, prime_cutoff, m_cutoff, 0, tail))


def _psi_diag_terms(k: int, m_cutoff: int | None) -> tuple[np.ndarray, np.ndarray]:
    freqs, coefs = [], []
    for p in _prime_divisors(k):
        m = 1
        while m_cutoff is None or m <= m_cutoff:
            c = -2.0 / (m * m * float(p) ** m)
            if abs(c) < TERM_FLOOR:
                break
            freqs.append(m * math.log(p))
            coefs.append(c)
            m += 1
    return np.array(freqs), np.array(coefs)


def log_psi_diag(eps, k: int, m_cutoff: int | None = None, derivative: int = 0):
    """log Psi_diag(eps, k) = -2 sum_{p | k} sum_{m>=1} cos(m eps log p)/(m^2 p^m)."""
    e, scalar = _eps_array(eps)
    freqs, coefs = _psi_diag_terms(int(k), m_cutoff)
    out = _cos_sum(e, freqs, coefs, derivative) if freqs.size else np.zeros(e.size)
    return float(out[0]) if scalar else out


def psi_diag(eps, k: int, m_cutoff: int | None = None):
    """Finite product over p | k; real and positive."""
    return np.exp(log_psi_diag(eps, k, m_cutoff))


def log_abs_zeta_sq(eps, derivative: int = 0):
    """log |zeta(1 + i eps)|^2 and its eps-derivatives, from zeta, zeta', zeta''."""
    e, scalar = _eps_array(eps)
    _check_nonzero(e)
    s = 1 + 1j * e
    z0 = zeta_em(s, 0)
    if derivative == 0:
        out = 2 * np.log(np.abs(z0))
    else:
        ld = zeta_em(s, 1) / z0
        if derivative == 1:
            out = 2 * np.real(1j * ld)
        else:
            out = -2 * np.real(zeta_em(s, 2) / z0 - ld**2)
    return float(out[0]) if scalar else out


def diag_log_function(eps, k: int, prime_cutoff: int = DEFAULT_PRIME_CUTOFF, m_cutoff: int | None = None):
    """log[|zeta(1+i eps)|^2 Phi_diag(eps) Psi_diag(eps, k)], whose second
    derivative gives R2_diag."""
    return log_abs_zeta_sq(eps) + log_phi_diag(eps, prime_cutoff, m_cutoff) + log_psi_diag(eps, k, m_cutoff)


def r2_diag(eps, k: int, prime_cutoff: int = DEFAULT_PRIME_CUTOFF, m_cutoff: int | None = None):
    """Diagonal part: -(1/4 pi^2) d^2/deps^2 log[|zeta|^2 Phi_diag Psi_diag],
    with every second derivative taken analytically."""
    d2 = (log_abs_zeta_sq(eps, 2) + log_phi_diag(eps, prime_cutoff, m_cutoff, 2)
          + log_psi_diag(eps, k, m_cutoff, 2))
    return -d2 / _FOUR_PI2


def _phi_off_log_tail(eps: np.ndarray, prime_cutoff: int) -> np.ndarray:
    # sum_{p > P} log(1 - (z-1)^2/(p-1)^2) ~ -sum (z^2 - 2z + 1)/p^2
    U = math.log(prime_cutoff)
    return -(exp1((1 - 2j * eps) * U) - 2 * exp1((1 - 1j * eps) * U) + exp1(U))


def _phi_off_product(eps: np.ndarray, prime_cutoff: int, exclude: list[int], tail: bool) -> np.ndarray:
    p, lp = _primes(prime_cutoff)
    if exclude:
        keep = ~np.isin(p, np.array(exclude, dtype=float))
        p, lp = p[keep], lp[keep]
    out = np.empty(eps.size, dtype=np.complex128)
    step = max(1, 2_000_000 // p.size)
    for lo in range(0, eps.size, step):
        z = np.exp(1j * np.outer(eps[lo : lo + step], lp))
        out[lo : lo + step] = np.prod(1 - (z - 1) ** 2 / (p - 1) ** 2, axis=1)
    if tail:
        out *= np.exp(_phi_off_log_tail(eps, prime_cutoff))
    return out


def phi_off(eps, prime_cutoff: int = DEFAULT_PRIME_CUTOFF, tail: bool = True):
    """prod_p (1 - (p^{i eps} - 1)^2/(p-1)^2); equals 1 at eps = 0."""
    e, scalar = _eps_array(eps)
    out = _phi_off_product(e, int(prime_cutoff), [], tail)
    return complex(out[0]) if scalar else out


def psi_off(eps, k: int):
    """prod_{p | k} (1 + (p^{i eps/2} - p^{-i eps/2})^2 / (p - p^{-i eps}))^{-1}.

    Each factor simplifies to (p - p^{-i eps}) / (p + p^{i eps} - 2); for p = 3
    the denominator vanishes where 3^{i eps} = -1, and a ZeroDivisionError is
    raised there. ``phi_off_psi_off`` evaluates the product with that pole
    cancelled against the matching zero of phi_off.
    """
    e, scalar = _eps_array(eps)
    out = np.ones(e.size, dtype=np.complex128)
    for p in _prime_divisors(k):
        z = np.exp(1j * e * math.log(p))
        den = p + z - 2
        if np.any(np.abs(den) < 1e-14):
            raise ZeroDivisionError(f"psi_off factor for p={p} has a pole where p^(i eps) = {2 - p}")
        out *= (p - 1 / z) / den
    return complex(out[0]) if scalar else out


def phi_off_psi_off(eps, k: int, prime_cutoff: int = DEFAULT_PRIME_CUTOFF, tail: bool = True):
    """phi_off * psi_off with the p | k factors merged into |p - p^{i eps}|^2/(p-1)^2."""
    e, scalar = _eps_array(eps)
    divs = _prime_divisors(k)
    out = _phi_off_product(e, int(prime_cutoff), [d for d in divs if d <= prime_cutoff], tail)
    for p in divs:
        if p > prime_cutoff:
            # p was never in the truncated product, only in the tail estimate
            z = np.exp(1j * e * math.log(p))
            out /= 1 - (z - 1) ** 2 / (p - 1) ** 2
        z = np.exp(1j * e * math.log(p))
        out *= np.abs(p - z) ** 2 / (p - 1) ** 2
    return complex(out[0]) if scalar else out


def r0_class_factor(eps, k: int):
    """prod_{p | k} (p - p^{-i eps}) / (p - 1), the extra factor of the r = 0 term."""
    e, scalar = _eps_array(eps)
    out = np.ones(e.size, dtype=np.complex128)
    for p in _prime_divisors(k):
        out *= (p - np.exp(-1j * e * math.log(p))) / (p - 1)
    return complex(out[0]) if scalar else out


def off_diagonal_term(eps, E: float, k: int, prime_cutoff: int = DEFAULT_PRIME_CUTOFF, tail: bool = True):
    """The complex half (1/4 pi^2) e^{2 pi i eps dbar} |zeta(1+i eps)|^2 Phi_off Psi_off;
    ``r2_off`` is twice its real part."""
    e, scalar = _eps_array(eps)
    out = _off_complex(e, E, k, prime_cutoff, tail)
    return complex(out[0]) if scalar else out


def _off_complex(e: np.ndarray, E: float, k: int, prime_cutoff: int, tail: bool) -> np.ndarray:
    _check_nonzero(e)
    phase = np.exp(1j * e * math.log(E * k / (2 * math.pi)))
    zeta_sq = np.abs(zeta_em(1 + 1j * e)) ** 2
    return phase * zeta_sq * phi_off_psi_off(e, k, prime_cutoff, tail) / _FOUR_PI2


def r2_off(eps, E: float, k: int, prime_cutoff: int = DEFAULT_PRIME_CUTOFF, tail: bool = True):
    """(1/4 pi^2) e^{i eps log(Ek/2pi)} |zeta(1+i eps)|^2 Phi_off Psi_off + c.c."""
    e, scalar = _eps_array(eps)
    out = 2 * np.real(_off_complex(e, E, k, prime_cutoff, tail))
    return float(out[0]) if scalar else out


def r2_off_r0(eps, E: float, k: int, prime_cutoff: int = DEFAULT_PRIME_CUTOFF, tail: bool = True):
    """Contribution of the r = 0 class alone: the off-diagonal complex term
    times ``r0_class_factor`` before adding the conjugate."""
    e, scalar = _eps_array(eps)
    out = 2 * np.real(_off_complex(e, E, k, prime_cutoff, tail) * r0_class_factor(e, k))
    return float(out[0]) if scalar else out


def _total(e: np.ndarray, E: float, k: int, prime_cutoff: int, m_cutoff: int | None) -> np.ndarray:
    d = mean_density(E, k)
    return d * d + r2_diag(e, k, prime_cutoff, m_cutoff) + r2_off(e, E, k, prime_cutoff)


def unfolded_r2(x, E: float, k: int, prime_cutoff: int = DEFAULT_PRIME_CUTOFF, m_cutoff: int | None = None,
                continuity_step: float = 0.02):
    """R2(x / dbar) / dbar^2 in unfolded units.

    The total is finite at x = 0 (the 1/eps^2 poles of the diagonal and
    off-diagonal parts cancel); points with |x| below ``continuity_step`` are
    filled by an even quadratic fit through x = h, 2h.
    """
    xs, scalar = _eps_array(x)
    d = mean_density(E, k)
    h = continuity_step
    small = np.abs(xs) < h
    out = np.empty(xs.size)
    if (~small).any():
        out[~small] = _total(xs[~small] / d, E, k, prime_cutoff, m_cutoff) / d**2
    if small.any():
        f1, f2 = _total(np.array([h, 2 * h]) / d, E, k, prime_cutoff, m_cutoff) / d**2
        c2 = (f2 - f1) / (3 * h * h)
        c0 = f1 - c2 * h * h
        out[small] = c0 + c2 * xs[small] ** 2
    return float(out[0]) if scalar else out


def tail_estimates(eps, k: int, prime_cutoff: int) -> dict:
    """Size of the prime-number-theorem tail terms applied on this grid."""
    e, _ = _eps_array(eps)
    e = e[e != 0] if np.any(e != 0) else np.array([1.0])
    return {
        "prime_cutoff": int(prime_cutoff),
        "log_phi_diag_tail_max": float(np.max(np.abs(_phi_diag_tail(e, prime_cutoff, 0, 4)))),
        "log_phi_diag_d2_tail_max": float(np.max(np.abs(_phi_diag_tail(e, prime_cutoff, 2, 4)))),
        "log_phi_off_tail_max": float(np.max(np.abs(_phi_off_log_tail(e, prime_cutoff)))),
    }


def r2_curve(component: str, eps_grid, E: float, k: int, prime_cutoff: int = DEFAULT_PRIME_CUTOFF,
             m_cutoff: int | None = None, normalization: str = "raw") -> CorrelationCurve:
    """Evaluate one component on a grid.

    With ``normalization="unfolded"`` the grid is read as x = eps * dbar and
    values are divided by dbar^2 (so the total tends to ``gue_r2``).
    """
    if component not in COMPONENTS:
        raise ValueError(f"component must be one of {COMPONENTS}")
    if normalization not in ("raw", "unfolded"):
        raise ValueError("normalization must be 'raw' or 'unfolded'")
    grid = np.asarray(eps_grid, dtype=float)
    d = mean_density(E, k)
    eps = grid / d if normalization == "unfolded" else grid
    params = CorrelationParams(E=E, k=k, eps_grid=tuple(eps.tolist()), prime_cutoff=prime_cutoff, m_cutoff=m_cutoff)
    scale = 1 / d**2 if normalization == "unfolded" else 1.0
    if component == "gue_reference":
        vals = gue_r2(eps * d)
        if normalization == "raw":
            vals = vals * d * d
    elif component == "total" and normalization == "unfolded":
        vals = unfolded_r2(grid, E, k, prime_cutoff, m_cutoff)
    else:
        _check_nonzero(eps)
        fn = {
            "diag": lambda: r2_diag(eps, k, prime_cutoff, m_cutoff),
            "off": lambda: r2_off(eps, E, k, prime_cutoff),
            "off_r0": lambda: r2_off_r0(eps, E, k, prime_cutoff),
            "total": lambda: _total(eps, E, k, prime_cutoff, m_cutoff),
        }[component]
        vals = fn() * scale
    return CorrelationCurve(params=params, component=component, values=np.atleast_1d(vals),
                            normalization=normalization, tail_estimates=tail_estimates(eps, k, prime_cutoff))


def r2_total(eps_grid, E: float, k: int, prime_cutoff: int = DEFAULT_PRIME_CUTOFF,
             m_cutoff: int | None = None) -> CorrelationCurve:
    """dbar^2 + R2_diag + R2_off on a grid that excludes 0."""
    return r2_curve("total", eps_grid, E, k, prime_cutoff, m_cutoff, "raw")
