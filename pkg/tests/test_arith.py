import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dirichlet_r2.arith import (
    MAX_SIEVE_LIMIT,
    SieveSizeError,
    chebyshev_psi,
    divisors,
    factorize,
    mobius,
    multiplicative_tables,
    prime_support,
    ramanujan_sum,
    ramanujan_sum_direct,
    ramanujan_sum_squarefree,
    sieve_primes,
    totient,
    von_mangoldt,
    von_mangoldt_array,
)
from oracles import brute_mobius, brute_primes, brute_totient


def test_sieve_matches_trial_division():
    assert sieve_primes(5000).primes.tolist() == brute_primes(5000)


@pytest.mark.parametrize("limit, count", [(10, 4), (10**6, 78498), (10**7, 664579)])
def test_prime_counts(limit, count):
    assert len(sieve_primes(limit)) == count


def test_sieve_segment_boundaries():
    # limits straddling the odd-only segment size
    for limit in (2 * (1 << 19) - 1, 2 * (1 << 19), 2 * (1 << 19) + 1, 2 * (1 << 19) + 3):
        ref = sieve_primes(limit + 100).primes_upto(limit)
        assert np.array_equal(sieve_primes(limit).primes, ref)


@pytest.mark.parametrize("bad", [0, 1, MAX_SIEVE_LIMIT + 1])
def test_sieve_limit_rejected(bad):
    with pytest.raises(SieveSizeError):
        sieve_primes(bad)


def test_prime_table_queries():
    t = sieve_primes(1000)
    assert t.is_prime(997) and not t.is_prime(999)
    assert t.smallest_factor(997) == 997
    assert t.smallest_factor(991 * 997) == 991
    assert t.prime_mask(10, 20).nonzero()[0].tolist() == [1, 3, 7, 9]
    with pytest.raises(ValueError):
        t.is_prime(1001)


@given(st.integers(1, 10**6))
@settings(max_examples=200, deadline=None)
def test_factorization_round_trip(n):
    f = factorize(n)
    assert math.prod(p**e for p, e in f.factors) == n
    assert all(sieve_primes(max(p, 2)).is_prime(p) for p in f.primes)
    assert list(f.primes) == sorted(f.primes)


@given(st.integers(1, 3000))
@settings(max_examples=200, deadline=None)
def test_mobius_totient_against_brute_force(n):
    assert mobius(n) == brute_mobius(n)
    assert totient(n) == brute_totient(n)


@given(st.integers(1, 2000), st.integers(1, 2000))
@settings(max_examples=200, deadline=None)
def test_multiplicativity(m, n):
    if math.gcd(m, n) == 1:
        assert totient(m * n) == totient(m) * totient(n)
        assert mobius(m * n) == mobius(m) * mobius(n)


def test_von_mangoldt_values():
    assert von_mangoldt(1) == 0.0
    assert von_mangoldt(32) == pytest.approx(math.log(2))
    assert von_mangoldt(12) == 0.0
    lam = von_mangoldt_array(500, sieve_primes(500))
    assert all(lam[n] == pytest.approx(von_mangoldt(n)) for n in range(1, 501))


def test_divisor_sums():
    # sum_{d | n} phi(d) = n and sum_{d | n} mu(d) = [n = 1]
    for n in range(1, 300):
        assert sum(totient(d) for d in divisors(n)) == n
        assert sum(mobius(d) for d in divisors(n)) == (1 if n == 1 else 0)


@given(st.integers(1, 60), st.integers(-200, 200))
@settings(max_examples=300, deadline=None)
def test_ramanujan_sum_closed_form(q, n):
    direct = ramanujan_sum_direct(q, n)
    assert abs(direct.imag) < 1e-9
    assert ramanujan_sum(q, n) == round(direct.real)


def test_ramanujan_sum_squarefree_vectorized():
    mu, phi = multiplicative_tables(500)
    q = np.flatnonzero(mu)
    for n in (1, 2, 6, 30, 97):
        assert ramanujan_sum_squarefree(q, phi, mu, n).tolist() == [ramanujan_sum(int(x), n) for x in q]


def test_multiplicative_tables_match_scalar():
    mu, phi = multiplicative_tables(1000)
    assert all(mu[n] == mobius(n) and phi[n] == totient(n) for n in range(1, 1001))


def test_chebyshev_psi_asymptotics():
    t = sieve_primes(10**7)
    assert chebyshev_psi(100, t) == pytest.approx(sum(von_mangoldt(n) for n in range(2, 101)))
    assert abs(chebyshev_psi(10**7, t) / 10**7 - 1) < 1e-3


def test_prime_support():
    assert prime_support([12, 35, 1]) == [2, 3, 5, 7]
