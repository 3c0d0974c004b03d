import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dirichlet_r2.arith import divisors, mobius, totient
from dirichlet_r2.characters import (
    DirichletCharacter,
    NonPrimitiveWarning,
    autocorrelation_g,
    character_group,
    conductor,
    enumerate_characters,
    g_fourier,
    gauss_sum,
    get_character,
    primitive_characters,
    root_number,
    twisted_gauss,
)


def _brute_conductor(chi):
    # smallest f | k with chi(n) = 1 whenever gcd(n, k) = 1 and n = 1 mod f
    k = chi.modulus
    for f in divisors(k):
        if all(abs(chi(n) - 1) < 1e-12 for n in range(1, k + 1) if math.gcd(n, k) == 1 and n % f == 1 % f):
            return f
    return k


@pytest.mark.parametrize("k", range(1, 41))
def test_group_size_and_orthogonality(k):
    chars = enumerate_characters(k)
    assert len(chars) == totient(k)
    assert character_group(k).order == totient(k)
    n = np.arange(k)
    mat = np.array([c(n) for c in chars])
    gram = mat @ mat.conj().T
    assert np.allclose(gram, totient(k) * np.eye(len(chars)), atol=1e-9)


@pytest.mark.parametrize("k", range(1, 61))
def test_primitive_count(k):
    # number of primitive characters = sum_{d | k} mu(k/d) phi(d)
    expected = sum(mobius(k // d) * totient(d) for d in divisors(k))
    assert len(primitive_characters(k)) == expected


@pytest.mark.parametrize("k", range(1, 25))
def test_conductors_against_brute_force(k):
    for chi in enumerate_characters(k):
        assert chi.conductor == conductor(chi) == _brute_conductor(chi)


@given(st.integers(1, 120), st.data())
@settings(max_examples=80, deadline=None)
def test_complete_multiplicativity(k, data):
    chars = enumerate_characters(k)
    chi = chars[data.draw(st.integers(0, len(chars) - 1))]
    m, n = data.draw(st.integers(0, 10**6)), data.draw(st.integers(0, 10**6))
    assert abs(chi(m * n) - chi(m) * chi(n)) < 1e-12
    assert abs(chi(n + k) - chi(n)) == 0
    assert (chi(n) == 0) == (math.gcd(n, k) != 1)


def test_mod4_values():
    chi = get_character(4)
    assert [chi(n) for n in range(4)] == [0, 1, 0, -1]
    assert chi.is_primitive and chi.is_real and chi.parity == 1
    assert abs(gauss_sum(chi) - 2j) < 1e-12
    assert abs(twisted_gauss(chi, 3) - (-2j)) < 1e-12
    assert abs(autocorrelation_g(chi, 2) - (-2)) < 1e-12


def test_labels_and_default():
    chi = get_character(15, "1,2")
    assert chi.label == (1, 2) and chi.label_str == "1,2"
    assert get_character(15) == primitive_characters(15)[0]
    with pytest.raises(ValueError):
        get_character(2)  # no primitive character mod 2
    with pytest.raises(ValueError):
        DirichletCharacter(5, (7,))


def test_induce_keeps_conductor():
    chi = get_character(4)
    big = chi.induce(8)
    assert big.modulus == 8 and big.conductor == 4 and not big.is_primitive
    for n in range(1, 40):
        assert big(n) == (chi(n) if n % 2 else 0)


def test_conj_and_order():
    for chi in enumerate_characters(13):
        assert np.allclose(chi.conj()(np.arange(13)), np.conj(chi(np.arange(13))))
        o = chi.order()
        assert np.allclose(chi(np.arange(1, 13)) ** o, 1)


def test_json_round_trip():
    for chi in enumerate_characters(20):
        data = json.loads(chi.to_json())
        assert data["modulus"] == 20 and data["conductor"] == chi.conductor
        assert data["values"][2] is None
        back = DirichletCharacter.from_dict(data)
        assert back == chi and np.array_equal(back(np.arange(20)), chi(np.arange(20)))


def test_twisted_gauss_warns_for_imprimitive():
    with pytest.warns(NonPrimitiveWarning):
        twisted_gauss(get_character(8, (0, 0)), 3)


def test_root_number_unimodular():
    for k in (3, 4, 5, 7, 8, 12, 13):
        for chi in primitive_characters(k):
            assert abs(abs(root_number(chi)) - 1) < 1e-12
            if chi.is_real:
                # Gauss: tau(chi) = sqrt(k) for even, i sqrt(k) for odd real primitive characters
                assert abs(root_number(chi) - 1) < 1e-12


def test_g_autocorrelation_single_case():
    # k = 5, chi(2) = i: g(r) computed term by term
    chi = get_character(5, "1")
    vals = [chi(n) for n in range(5)]
    assert abs(vals[2] - 1j) < 1e-12 or abs(vals[2] + 1j) < 1e-12
    g1 = sum(vals[r] * np.conj(vals[(r + 1) % 5]) for r in range(5))
    assert abs(autocorrelation_g(chi, 1) - g1) < 1e-12
    assert abs(g_fourier(chi, 0)) < 1e-9
    assert abs(g_fourier(chi, 1) - 5) < 1e-9
