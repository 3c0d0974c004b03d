"""Exact integer arithmetic: prime sieving, factorization and the classical
multiplicative functions (Moebius, Euler totient, von Mangoldt, Ramanujan sums).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

MAX_SIEVE_LIMIT = 10**8
_SEGMENT_ODDS = 1 << 19


class SieveSizeError(ValueError):
    """Requested sieve bound is outside the supported range."""


@dataclass(frozen=True)
class PrimeTable:
    """All primes up to ``limit`` (inclusive).

    The least prime factor of any ``n <= limit`` is answered by trial division
    over the stored primes, which keeps memory at ``O(pi(limit))`` even for
    ``limit = 10**8``.
    """

    limit: int
    primes: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return int(self.primes.size)

    def is_prime(self, n: int) -> bool:
        if n > self.limit:
            raise ValueError(f"{n} exceeds table limit {self.limit}")
        i = np.searchsorted(self.primes, n)
        return bool(i < self.primes.size and self.primes[i] == n)

    def smallest_factor(self, n: int) -> int:
        """Least prime factor of ``n`` (``n`` itself when prime)."""
        if n < 2:
            raise ValueError("smallest_factor is defined for n >= 2")
        root = math.isqrt(n)
        if root > self.limit:
            raise ValueError(f"{n} needs primes up to {root}; table stops at {self.limit}")
        for p in self.primes[: np.searchsorted(self.primes, root, side="right")]:
            if n % p == 0:
                return int(p)
        return n

    def primes_upto(self, x: int) -> np.ndarray:
        return self.primes[: np.searchsorted(self.primes, x, side="right")]

    def prime_mask(self, lo: int, hi: int) -> np.ndarray:
        """Boolean array ``mask[i] = (lo + i is prime)`` for ``lo <= n < hi``."""
        if hi - 1 > self.limit:
            raise ValueError(f"mask upper end {hi - 1} exceeds table limit {self.limit}")
        mask = np.zeros(max(hi - lo, 0), dtype=bool)
        sel = self.primes[np.searchsorted(self.primes, lo) : np.searchsorted(self.primes, hi)]
        mask[sel - lo] = True
        return mask


@dataclass(frozen=True)
class FactoredInt:
    """A positive integer together with its prime factorization."""

    n: int
    factors: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def __int__(self) -> int:
        return self.n

    def divisors(self) -> list[int]:
        divs = [1]
        for p, e in self.factors:
            divs = [d * p**j for d in divs for j in range(e + 1)]
        return sorted(divs)


def _small_primes(limit: int) -> np.ndarray:
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if mask[i]:
            mask[i * i :: i] = False
    return np.flatnonzero(mask).astype(np.int64)


def _odd_segments(limit: int, base: np.ndarray) -> Iterator[np.ndarray]:
    # index i in a segment stands for the odd number 2*(start + i) + 1
    n_odds = (limit - 1) // 2 + 1
    odd_base = base[1:]
    for start in range(0, n_odds, _SEGMENT_ODDS):
        stop = min(start + _SEGMENT_ODDS, n_odds)
        seg = np.ones(stop - start, dtype=bool)
        lo = 2 * start + 1
        hi = 2 * (stop - 1) + 1
        for p in odd_base:
            if p * p > hi:
                break
            first = max(p * p, ((lo + p - 1) // p) * p)
            if first % 2 == 0:
                first += p
            seg[(first - lo) // 2 :: p] = False
        if start == 0:
            seg[0] = False  # 1 is not prime
        yield 2 * (start + np.flatnonzero(seg)) + 1


def sieve_primes(limit: int) -> PrimeTable:
    """Segmented, odd-only sieve of Eratosthenes.

    Args:
        limit: inclusive upper bound, ``2 <= limit <= MAX_SIEVE_LIMIT``.

    Raises:
        SieveSizeError: if ``limit`` is out of range.
    """
    limit = int(limit)
    if not 2 <= limit <= MAX_SIEVE_LIMIT:
        raise SieveSizeError(f"sieve limit must lie in [2, {MAX_SIEVE_LIMIT}], got {limit}")
    base = _small_primes(math.isqrt(limit))
    chunks = [np.array([2], dtype=np.int64)]
    chunks.extend(seg.astype(np.int64) for seg in _odd_segments(limit, base))
    primes = np.concatenate(chunks)
    primes.setflags(write=False)
    return PrimeTable(limit=limit, primes=primes)


def factorize(n: int, table: PrimeTable | None = None) -> FactoredInt:
    """Prime factorization by trial division over ``table`` (built on demand)."""
    n = int(n)
    if n <= 0:
        raise ValueError(f"factorize needs a positive integer, got {n}")
    root = math.isqrt(n)
    if table is None or table.limit < root:
        table = sieve_primes(max(root, 2))
    factors = []
    m = n
    for p in table.primes:
        p = int(p)
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
    if m > 1:
        factors.append((m, 1))
    return FactoredInt(n, tuple(factors))


def _as_factored(n: int | FactoredInt) -> FactoredInt:
    return n if isinstance(n, FactoredInt) else factorize(n)


def mobius(n: int | FactoredInt) -> int:
    f = _as_factored(n)
    if any(e > 1 for _, e in f.factors):
        return 0
    return -1 if len(f.factors) % 2 else 1


def totient(n: int | FactoredInt) -> int:
    f = _as_factored(n)
    out = 1
    for p, e in f.factors:
        out *= (p - 1) * p ** (e - 1)
    return out


def von_mangoldt(n: int | FactoredInt) -> float:
    """``log p`` if ``n`` is a power of the prime ``p``, else 0."""
    f = _as_factored(n)
    return math.log(f.factors[0][0]) if len(f.factors) == 1 else 0.0


def ramanujan_sum(q: int, n: int) -> int:
    """c_q(n) via the closed form ``mu(q/g) phi(q) / phi(q/g)``, ``g = gcd(q, n)``."""
    if q < 1:
        raise ValueError("q must be >= 1")
    g = math.gcd(q, n)
    r = factorize(q // g)
    mu = mobius(r)
    if mu == 0:
        return 0
    return mu * (totient(q) // totient(r))


def ramanujan_sum_direct(q: int, n: int) -> complex:
    """The defining exponential sum; kept for cross-checking the closed form."""
    p = np.array([a for a in range(1, q + 1) if math.gcd(a, q) == 1])
    return complex(np.exp(2j * np.pi * p * n / q).sum())


def multiplicative_tables(limit: int) -> tuple[np.ndarray, np.ndarray]:
    """Arrays ``mu[0..limit]`` and ``phi[0..limit]`` (index 0 unused)."""
    mu = np.ones(limit + 1, dtype=np.int8)
    phi = np.arange(limit + 1, dtype=np.int64)
    mu[0] = 0
    for p in _small_primes(limit):
        phi[p::p] -= phi[p::p] // p
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
    return mu, phi


def ramanujan_sum_squarefree(q: np.ndarray, phi: np.ndarray, mu: np.ndarray, n: int) -> np.ndarray:
    """Vectorized ``c_q(n)`` for squarefree ``q``: ``mu(q/g) phi(g)``."""
    g = np.gcd(q, abs(int(n)))
    return mu[q // g].astype(np.int64) * phi[g]


def von_mangoldt_array(limit: int, table: PrimeTable) -> np.ndarray:
    """``lam[n] = Lambda(n)`` for ``0 <= n <= limit``."""
    if table.limit < limit:
        raise ValueError(f"prime table stops at {table.limit}, need {limit}")
    lam = np.zeros(limit + 1, dtype=np.float64)
    ps = table.primes_upto(limit)
    logs = np.log(ps.astype(np.float64))
    lam[ps] = logs
    for p, lp in zip(ps[: np.searchsorted(ps, math.isqrt(limit), side="right")], logs):
        q = int(p) * int(p)
        while q <= limit:
            lam[q] = lp
            q *= int(p)
    return lam


def divisors(n: int) -> list[int]:
    return factorize(n).divisors()


def chebyshev_psi(x: int, table: PrimeTable) -> float:
    """Sum of Lambda(m) for m <= x."""
    ps = table.primes_upto(x)
    total = float(np.log(ps.astype(np.float64)).sum())
    for p in ps[: np.searchsorted(ps, math.isqrt(x), side="right")]:
        q = int(p) * int(p)
        while q <= x:
            total += math.log(p)
            q *= int(p)
    return total


def prime_support(values: Sequence[int]) -> list[int]:
    """Sorted distinct primes dividing any of ``values``."""
    out: set[int] = set()
    for v in values:
        out.update(factorize(v).primes)
    return sorted(out)
