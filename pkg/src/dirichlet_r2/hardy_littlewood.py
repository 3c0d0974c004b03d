"""Prime-pair densities: the twin-prime constant, the singular series alpha(h)
in product and Ramanujan-series form, its restriction to arithmetic
progressions, and sieve-based measurement of the same densities.

Local-factor picture used below: alpha(h) = prod_p a_p(h) with
a_p(h) = 1 - 1/(p-1)^2 for p not dividing h and p/(p-1) for p | h (the p = 2
factor is 2 for even h and 0 for odd h). Restricting n to a class r mod k with
r and r + h both units replaces a_p(h) by (p/(p-1))^2 for every p | k.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import gamma as complex_gamma

from .arith import PrimeTable, factorize, multiplicative_tables, ramanujan_sum_squarefree, sieve_primes
from .specfun import zeta_em

DEFAULT_PRIME_CUTOFF = 10**7

PAIR_CSV_HEADER = "h,k,r,N,lambda_mean,pi2,predicted,rel_err"


class CoprimalityError(ValueError):
    """Residue class cannot contain infinitely many prime pairs."""


@dataclass(frozen=True)
class HLDensity:
    h: int
    k: int
    alpha: float
    beta: float
    alpha_ap: float
    prime_cutoff: int


@dataclass(frozen=True)
class PairCountReport:
    h: int
    k: int
    r: int
    N: int
    lambda_weighted_mean: float
    pi2_count: int
    predicted: float
    relative_error: float
    pi2_predicted: float = float("nan")
    lambda_stderr: float = float("nan")
    extra: dict = field(default_factory=dict, compare=False)

    def to_csv_row(self) -> str:
        return (
            f"{self.h},{self.k},{self.r},{self.N},{self.lambda_weighted_mean:.10g},"
            f"{self.pi2_count},{self.predicted:.10g},{self.relative_error:.6g}"
        )


@lru_cache(maxsize=8)
def _cached_table(limit: int) -> PrimeTable:
    return sieve_primes(limit)


@lru_cache(maxsize=16)
def twin_constant(prime_cutoff: int = DEFAULT_PRIME_CUTOFF) -> float:
    """C2 = prod_{2 < p <= cutoff} (1 - 1/(p-1)^2)."""
    if prime_cutoff < 3:
        raise ValueError(f"prime_cutoff must be >= 3, got {prime_cutoff}")
    p = _cached_table(int(prime_cutoff)).primes[1:].astype(np.float64)
    return float(np.exp(np.sum(np.log1p(-1.0 / (p - 1.0) ** 2))))


def alpha(h: int, prime_cutoff: int = DEFAULT_PRIME_CUTOFF) -> float:
    """Singular series 2 C2 prod_{p | h, p > 2} (p-1)/(p-2); zero for odd h."""
    if h == 0:
        raise ValueError("alpha(h) is undefined for h = 0")
    if h % 2:
        return 0.0
    out = 2.0 * twin_constant(prime_cutoff)
    for p in factorize(abs(h)).primes:
        if p > 2:
            out *= (p - 1) / (p - 2)
    return out


@lru_cache(maxsize=4)
def _series_tables(Q: int):
    mu, phi = multiplicative_tables(Q)
    q = np.flatnonzero(mu)  # squarefree q >= 1
    return q, mu, phi


def alpha_series(h: int, Q: int, coprime_to: int = 1) -> float:
    """Partial sum over q <= Q (optionally with gcd(q, coprime_to) = 1) of
    (mu(q)/phi(q))^2 c_q(h)."""
    if Q < 1:
        raise ValueError("Q must be >= 1")
    q, mu, phi = _series_tables(int(Q))
    if coprime_to != 1:
        q = q[np.gcd(q, coprime_to) == 1]
    c = ramanujan_sum_squarefree(q, phi, mu, h)
    return float(np.sum(c / phi[q].astype(np.float64) ** 2))


def beta(h: int, k: int) -> float:
    """Progression factor with alpha(h, k) = alpha(h) beta(h, k):
    prod_{p | k, p !| h} p/(p-2) * prod_{p | k, p | h} p/(p-1).

    For 2 | k and odd h no admissible class exists and the factor is 0.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    out = 1.0
    for p in factorize(k).primes:
        if h % p == 0:
            out *= p / (p - 1)
        elif p == 2:
            return 0.0
        else:
            out *= p / (p - 2)
    return out


def beta_printed(h: int, k: int) -> float:
    """The product prod_{p|k, p|h} (p-1)/(p-2) * prod_{p|k} (p-1)^2/(p(p-2))
    taken literally over odd p. Kept for comparison only: the sieve measurement
    contradicts it (see ``beta``)."""
    out = 1.0
    for p in factorize(k).primes:
        if p == 2:
            continue
        if h % p == 0:
            out *= (p - 1) / (p - 2)
        out *= (p - 1) ** 2 / (p * (p - 2))
    return out


def s_factor(k: int, r1: int, r2: int) -> Fraction:
    """(k/phi(k))^2 when r1 and r2 are both units mod k, else 0 (exact)."""
    if math.gcd(r1, k) != 1 or math.gcd(r2, k) != 1:
        return Fraction(0)
    out = Fraction(1)
    for p in factorize(k).primes:
        out *= Fraction(p, p - 1) ** 2
    return out


def alpha_ap(h: int, k: int, prime_cutoff: int = DEFAULT_PRIME_CUTOFF) -> float:
    return alpha(h, prime_cutoff) * beta(h, k)


def alpha_ap_series(h: int, k: int, Q: int) -> float:
    """S(k) times the Ramanujan series restricted to gcd(q, k) = 1; an
    independent route to alpha(h) beta(h, k)."""
    classes = admissible_residues(h, k)
    if not classes:
        return 0.0
    r = classes[0]
    return float(s_factor(k, r, r + h)) * alpha_series(h, Q, coprime_to=k)


def hl_density(h: int, k: int, prime_cutoff: int = DEFAULT_PRIME_CUTOFF) -> HLDensity:
    a = alpha(h, prime_cutoff)
    b = beta(h, k)
    return HLDensity(h=h, k=k, alpha=a, beta=b, alpha_ap=a * b, prime_cutoff=prime_cutoff)


def admissible_residues(h: int, k: int) -> list[int]:
    return [r for r in range(k) if math.gcd(r, k) == 1 and math.gcd(r + h, k) == 1]


class LambdaTable:
    """von Mangoldt values and a primality mask on [0, limit]."""

    def __init__(self, limit: int, table: PrimeTable | None = None):
        table = table if table is not None and table.limit >= limit else sieve_primes(limit)
        self.limit = limit
        self.is_prime = np.zeros(limit + 1, dtype=bool)
        ps = table.primes_upto(limit)
        self.is_prime[ps] = True
        self.lam = np.zeros(limit + 1, dtype=np.float64)
        logs = np.log(ps.astype(np.float64))
        self.lam[ps] = logs
        for p, lp in zip(ps[: np.searchsorted(ps, math.isqrt(limit), side="right")].tolist(), logs):
            q = p * p
            while q <= limit:
                self.lam[q] = lp
                q *= p


def _pair_chunk(lt: LambdaTable, k: int, r: int, h: int, m_lo: int, m_hi: int) -> tuple[float, int, float]:
    n = k * np.arange(m_lo, m_hi, dtype=np.int64) + r
    lam_sum = float(np.dot(lt.lam[n], lt.lam[n + h]))
    pi2 = int(np.count_nonzero(lt.is_prime[n] & lt.is_prime[n + h]))
    big = n[n >= 2]  # log 1 = 0; n = 1 carries no prime anyway
    weight = float(np.sum(1.0 / (np.log(big) * np.log(big + h))))
    return lam_sum, pi2, weight


def empirical_pair_density(
    h: int,
    k: int,
    r: int,
    N: int,
    table: PrimeTable | LambdaTable | None = None,
    threads: int = 1,
    prime_cutoff: int = DEFAULT_PRIME_CUTOFF,
) -> PairCountReport:
    """Measure (1/N) sum_{m=1}^{N} Lambda(km+r) Lambda(km+r+h) and the number
    of m <= N with km+r and km+r+h both prime.

    ``predicted`` is alpha(h) beta(h, k); the count prediction integrates
    alpha(h, k) / (log n log(n+h)) over the same m.

    Raises:
        CoprimalityError: if r or r + h shares a factor with k.
    """
    if h <= 0 or N < 1:
        raise ValueError("need h >= 1 and N >= 1")
    r %= k
    if math.gcd(r, k) != 1:
        raise CoprimalityError(f"gcd(r, k) = gcd({r}, {k}) = {math.gcd(r, k)}: class holds finitely many primes")
    if math.gcd(r + h, k) != 1:
        raise CoprimalityError(
            f"gcd(r + h, k) = gcd({r + h}, {k}) = {math.gcd(r + h, k)}: shifted class holds finitely many primes")
    top = k * N + r + h
    if isinstance(table, LambdaTable) and table.limit >= top:
        lt = table
    else:
        lt = LambdaTable(top, table if isinstance(table, PrimeTable) else None)
    bounds = np.linspace(1, N + 1, max(1, threads) + 1).astype(np.int64)
    spans = [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda ab: _pair_chunk(lt, k, r, h, *ab), spans))
    else:
        parts = [_pair_chunk(lt, k, r, h, *ab) for ab in spans]
    lam_sum = sum(p[0] for p in parts)
    pi2 = sum(p[1] for p in parts)
    weight = sum(p[2] for p in parts)
    mean = lam_sum / N
    predicted = alpha_ap(h, k, prime_cutoff)
    rel = abs(mean - predicted) / predicted if predicted > 0 else float("nan")
    return PairCountReport(
        h=h,
        k=k,
        r=r,
        N=N,
        lambda_weighted_mean=mean,
        pi2_count=pi2,
        predicted=predicted,
        relative_error=rel,
        pi2_predicted=predicted * weight,
        lambda_stderr=mean / math.sqrt(pi2) if pi2 else float("inf"),
    )


def ramanujan_expansion_partials(n: int, Q: int) -> np.ndarray:
    """Partial sums S_1..S_Q of sum_q mu(q)/phi(q) c_q(n); target phi(n)Lambda(n)/n.

    The series converges only conditionally, so callers should look at the
    Cesaro means (``np.cumsum(S) / arange``) as well as the raw partial sums.
    """
    if n < 1 or Q < 1:
        raise ValueError("need n >= 1 and Q >= 1")
    mu, phi = multiplicative_tables(Q)
    q = np.arange(1, Q + 1)
    terms = np.zeros(Q)
    sf = mu[1:] != 0
    c = ramanujan_sum_squarefree(q[sf], phi, mu, n)
    terms[sf] = mu[1:][sf] * c / phi[1:][sf]
    return np.cumsum(terms)


def ramanujan_expansion_partial(n: int, Q: int, smoothing: str | None = None) -> float:
    """sum_{q <= Q} (mu(q)/phi(q)) c_q(n); ``smoothing="cesaro"`` returns the
    order-1 Cesaro mean of the partial sums instead."""
    partials = ramanujan_expansion_partials(n, Q)
    if smoothing is None:
        return float(partials[-1])
    if smoothing == "cesaro":
        return float(partials.mean())
    raise ValueError(f"unknown smoothing {smoothing!r}")


def expansion_target(n: int) -> float:
    f = factorize(n)
    if len(f.factors) != 1:
        return 0.0
    p, e = f.factors[0]
    return (p - 1) * p ** (e - 1) * math.log(p) / n


def coprime_zeta(s: complex, M: int) -> complex:
    """zeta(s) prod_{p | M} (1 - p^{-s}): the Dirichlet series over R coprime to M."""
    s = complex(s)
    if s == 1:
        raise ZeroDivisionError("pole at s = 1")
    out = complex(zeta_em(s))
    for p in factorize(M).primes:
        out *= 1 - p ** (-s)
    return out


def coprime_zeta_partial(s: complex, M: int, cutoff: int, method: str = "cesaro") -> complex:
    """Truncated sum over R <= cutoff, gcd(R, M) = 1, of R^{-s}.

    On Re s = 1 the plain partial sums oscillate forever around the limit
    (the X^{1-s}/(1-s) term does not decay), so the smoothed variants weight
    the terms and subtract that analytically known term:

    * ``"cesaro"``: weights (1 - R/X), minus (phi(M)/M) X^{1-s}/((1-s)(2-s)).
    * ``"abel"``: weights exp(-R/Y) with Y = X/40 (so the cut at X costs
      e^{-40}), minus (phi(M)/M) Gamma(1-s) Y^{1-s}.
    * ``"plain"``: the raw partial sum.

    Both smoothed versions are accurate to O(1/X) (O(40/X) for Abel).
    """
    s = complex(s)
    if s == 1:
        raise ZeroDivisionError("pole at s = 1")
    X = int(cutoff)
    R = np.arange(1, X + 1, dtype=np.int64)
    if M > 1:
        R = R[np.gcd(R, M) == 1]
    Rf = R.astype(np.float64)
    terms = np.exp(-s * np.log(Rf))
    dens = 1.0
    for p in factorize(M).primes:
        dens *= 1 - 1 / p
    if method == "plain":
        return complex(terms.sum())
    if method == "cesaro":
        main = dens * X ** (1 - s) / ((1 - s) * (2 - s))
        return complex(np.sum((1 - Rf / X) * terms) - main)
    if method == "abel":
        Y = X / 40.0
        main = dens * complex_gamma(1 - s) * Y ** (1 - s)
        return complex(np.sum(np.exp(-Rf / Y) * terms) - main)
    raise ValueError(f"unknown method {method!r}")
