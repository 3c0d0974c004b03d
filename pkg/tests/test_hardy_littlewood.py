import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dirichlet_r2.arith import factorize
from dirichlet_r2.hardy_littlewood import (
    PAIR_CSV_HEADER,
    CoprimalityError,
    LambdaTable,
    admissible_residues,
    alpha,
    alpha_ap,
    alpha_ap_series,
    alpha_series,
    beta,
    beta_printed,
    coprime_zeta,
    coprime_zeta_partial,
    empirical_pair_density,
    expansion_target,
    hl_density,
    ramanujan_expansion_partial,
    ramanujan_expansion_partials,
    s_factor,
    twin_constant,
)

C2 = 0.6601618158468696  # 16-digit literature value, used only for tolerance checks


@pytest.fixture(scope="module")
def lam_table():
    return LambdaTable(3 * 10**6 + 20)


def test_twin_constant_values():
    assert twin_constant(3) == 0.75
    assert abs(twin_constant(10**7) - 0.6601618) < 1e-6
    assert abs(twin_constant(10**5) - twin_constant(10**7)) < 1e-5
    with pytest.raises(ValueError):
        twin_constant(2)


def test_twin_constant_monotone():
    vals = [twin_constant(c) for c in (10, 100, 10**3, 10**4, 10**5)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_alpha_examples():
    assert alpha(3) == 0.0 and alpha(-7) == 0.0
    assert alpha(2) == pytest.approx(2 * twin_constant(10**7), rel=1e-15)
    assert abs(alpha(2) - 2 * C2) < 1e-6
    assert alpha(6) == pytest.approx(4 * twin_constant(10**7), rel=1e-15)
    assert alpha(30) == pytest.approx(alpha(6) * 4 / 3, rel=1e-15)
    with pytest.raises(ValueError):
        alpha(0)


def test_alpha_series_small_q():
    assert alpha_series(17, 1) == 1.0
    assert alpha_series(2, 1) == 1.0


@pytest.mark.parametrize("h", [2, 6, 10, 3, 9])
def test_alpha_series_converges(h):
    assert abs(alpha_series(h, 10**4) - alpha(h, 10**6)) < 3e-3


def test_beta_values():
    # derived from sieve measurements of the progression densities
    assert beta(2, 1) == 1.0
    assert beta(2, 3) == 3.0
    assert beta(3, 3) == 1.5
    assert beta(2, 4) == 2.0
    assert beta(2, 5) == pytest.approx(5 / 3)
    assert beta(6, 5) == pytest.approx(5 / 3)
    assert beta(3, 4) == 0.0
    assert beta(2, 12) == pytest.approx(6.0)


def test_beta_printed_literal():
    assert beta_printed(1, 1) == 1.0
    assert beta_printed(2, 3) == pytest.approx(4 / 3)
    assert beta_printed(3, 3) == pytest.approx(8 / 3)


@pytest.mark.parametrize("h, k, r", [(2, 3, 2), (4, 3, 1), (2, 4, 1), (2, 5, 1)])
def test_beta_printed_contradicted_by_sieve(lam_table, h, k, r):
    N = (3 * 10**6) // k
    rep = empirical_pair_density(h, k, r, N, table=lam_table)
    mean = rep.lambda_weighted_mean
    assert abs(mean / (alpha(h) * beta(h, k)) - 1) < 0.03
    if beta_printed(h, k) != beta(h, k):
        assert abs(mean / (alpha(h) * beta_printed(h, k)) - 1) > 0.2


def _pattern(h, k):
    return tuple(h % p == 0 for p in factorize(2 * k).primes)


def test_beta_depends_only_on_divisibility_pattern():
    for k in range(1, 13):
        by_pattern = {}
        for h in range(1, 101):
            by_pattern.setdefault(_pattern(h, k), set()).add(round(beta(h, k), 12))
        assert all(len(v) == 1 for v in by_pattern.values())


def test_alpha_ap_product_and_series():
    for h in (2, 4, 6, 12):
        for k in (1, 3, 4, 5, 12):
            d = hl_density(h, k)
            assert d.alpha_ap == d.alpha * d.beta
            assert alpha_ap(h, k) == d.alpha_ap
            assert abs(alpha_ap_series(h, k, 10**4) - d.alpha_ap) < 5e-3 * max(1, d.alpha_ap)


def test_s_factor():
    assert s_factor(1, 0, 0) == 1
    assert s_factor(4, 1, 3) == 4
    assert s_factor(6, 2, 5) == 0
    assert s_factor(30, 1, 7) == Fraction(30, 8) ** 2


@given(st.integers(1, 500), st.integers(0, 500), st.integers(0, 500))
@settings(max_examples=200, deadline=None)
def test_s_factor_exact_rational(k, r1, r2):
    units = math.gcd(r1, k) == 1 and math.gcd(r2, k) == 1
    expected = Fraction(1)
    for p in factorize(k).primes:
        expected *= Fraction(p, p - 1)
    assert s_factor(k, r1, r2) == (expected**2 if units else 0)


def test_empirical_twin_primes(lam_table):
    rep = empirical_pair_density(2, 1, 0, 3 * 10**6, table=lam_table)
    assert rep.relative_error < 0.02
    assert rep.pi2_count > 0
    assert abs(rep.pi2_count / rep.pi2_predicted - 1) < 0.05


def test_empirical_threads_agree(lam_table):
    a = empirical_pair_density(2, 3, 2, 10**6, table=lam_table)
    b = empirical_pair_density(2, 3, 2, 10**6, table=lam_table, threads=3)
    assert a.pi2_count == b.pi2_count
    assert a.lambda_weighted_mean == pytest.approx(b.lambda_weighted_mean, rel=1e-12)


def test_empirical_rejects_non_coprime():
    with pytest.raises(CoprimalityError, match="gcd"):
        empirical_pair_density(2, 3, 1, 1000)
    with pytest.raises(CoprimalityError):
        empirical_pair_density(2, 4, 2, 1000)


def test_density_depends_on_difference_only(lam_table):
    # for fixed h and k all admissible classes share one density
    h, k = 2, 5
    means = [empirical_pair_density(h, k, r, 600000, table=lam_table).lambda_weighted_mean
             for r in admissible_residues(h, k)]
    assert len(means) == 3
    assert np.std(means) / np.mean(means) < 0.02


def test_csv_row_shape(lam_table):
    row = empirical_pair_density(2, 3, 2, 10**4, table=lam_table).to_csv_row()
    assert len(row.split(",")) == len(PAIR_CSV_HEADER.split(","))


def test_ramanujan_expansion():
    assert ramanujan_expansion_partial(1, 1) == 1.0
    for n in (4, 7, 8, 9, 13):
        assert abs(ramanujan_expansion_partial(n, 10**5, "cesaro") - expansion_target(n)) < 2e-3
    assert expansion_target(4) == pytest.approx(math.log(2) / 2)
    assert abs(ramanujan_expansion_partial(6, 10**5, "cesaro")) < 1e-3
    assert ramanujan_expansion_partials(6, 10).shape == (10,)
    with pytest.raises(ValueError):
        ramanujan_expansion_partial(4, 10, "abel")


def test_coprime_zeta_closed_form():
    assert abs(coprime_zeta(2, 1) - math.pi**2 / 6) < 1e-13
    ref = math.pi**2 / 6 * (1 - 1 / 4) * (1 - 1 / 9)
    assert abs(coprime_zeta(2, 6) - ref) < 1e-13
    assert abs(coprime_zeta_partial(2, 6, 10**6, "plain") - ref) < 1e-6
    with pytest.raises(ZeroDivisionError):
        coprime_zeta(1, 2)


@pytest.mark.parametrize("method", ["cesaro", "abel"])
def test_coprime_zeta_boundary_smoothing(method):
    s = 1 + 1j
    assert abs(coprime_zeta_partial(s, 2, 10**5, method) - coprime_zeta(s, 2)) < 1e-3


def test_plain_sums_do_not_converge_on_boundary():
    s = 1 + 1j
    errs = [abs(coprime_zeta_partial(s, 1, X, "plain") - coprime_zeta(s, 1)) for X in (10**4, 10**5)]
    assert min(errs) > 0.5
