import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from dirichlet_r2.characters import get_character, primitive_characters
from dirichlet_r2.correlation import gue_r2, mean_density
from dirichlet_r2.specfun import PoleError
from dirichlet_r2.zeros import (
    EmpiricalR2,
    NonPrimitiveError,
    TruncationWarning,
    ZeroList,
    compare_histograms,
    empirical_r2,
    explicit_density_check,
    find_zeros,
    l_value,
    oscillating_density,
    poisson_surrogate,
    predicted_histogram,
    rotated_signal,
    smooth_count,
    unfolding_windows,
)
from oracles import catalan_series, leibniz_series

CHI4 = get_character(4)


@pytest.fixture(scope="module")
def zeros_k4_window():
    # zeros covering [850, 1150] for the explicit-formula checks
    return find_zeros(CHI4, 800.0, 1200.0)


def test_l_value_closed_forms():
    assert abs(l_value(1, CHI4) - leibniz_series()) < 1e-9
    assert abs(l_value(1, CHI4) - math.pi / 4) < 1e-9
    assert abs(l_value(2, CHI4) - catalan_series()) < 1e-9


def test_l_value_against_partial_sums():
    # Re s = 2: the tail beyond n = 10^6 is below 1e-6 in absolute value
    chi = get_character(7, "1")
    n = np.arange(1, 10**6 + 1)
    for s in (2.0, 2 + 3j):
        direct = np.sum(chi(n) * np.exp(-s * np.log(n)))
        assert abs(l_value(s, chi) - direct) < 1e-6


def test_l_value_zeta_case():
    zeta = get_character(1)
    assert abs(l_value(2, zeta) - math.pi**2 / 6) < 1e-12
    with pytest.raises(PoleError):
        l_value(1, zeta)


def test_l_value_against_mpmath_on_critical_line():
    for k, label in ((5, "1"), (8, "1,1"), (11, "3")):
        chi = get_character(k, label)
        coeffs = [complex(chi(n)) for n in range(k)]
        for t in (3.0, 250.0, 4000.0):
            s = 0.5 + 1j * t
            with mpmath.workdps(25):
                ref = complex(mpmath.dirichlet(s, coeffs))
            assert abs(l_value(s, chi) - ref) < 1e-9 * max(1, abs(ref))


@given(st.floats(0.2, 3), st.floats(-300, 300))
@settings(max_examples=50, deadline=None)
def test_l_value_conjugation(x, y):
    chi = get_character(5, "1")
    s = complex(x, y)
    assert abs(l_value(s.conjugate(), chi.conj()) - np.conj(l_value(s, chi))) < 1e-10 * max(1, abs(l_value(s, chi)))


def test_non_primitive_rejected():
    with pytest.raises(NonPrimitiveError, match="conductor 4"):
        l_value(2, CHI4.induce(8))
    with pytest.raises(NonPrimitiveError):
        find_zeros(get_character(6, "0"), 1, 10)


def test_rotation_residual_small():
    rng = np.random.default_rng(0)
    t = rng.uniform(1, 500, 1000)
    chars = [c for k in range(1, 21) for c in primitive_characters(k)]
    for i, chi in enumerate(chars):
        sub = t[i::len(chars)]
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            z, resid = rotated_signal(sub, chi, return_residual=True)
        L = np.abs(l_value(0.5 + 1j * sub, chi))
        assert np.all(resid <= 1e-8)
        assert np.allclose(np.abs(z), L, rtol=1e-8, atol=1e-12)


def test_riemann_siegel_reduction():
    zeta = get_character(1)
    t = np.linspace(10, 500, 20)
    ref = np.array([float(mpmath.siegelz(x)) for x in t])
    assert np.allclose(rotated_signal(t, zeta), ref, rtol=1e-9, atol=1e-10)


def test_first_riemann_zeros():
    zl = find_zeros(get_character(1), 1, 40)
    assert np.allclose(zl.zeros, [float(mpmath.zetazero(n).imag) for n in range(1, 7)], atol=1e-9)


def test_zero_census_k4():
    zl = find_zeros(CHI4, 0.01, 200)
    assert abs(len(zl) - smooth_count(200, 4)) <= 3
    assert zl.audit_passed
    L = np.abs(l_value(0.5 + 1j * zl.zeros, CHI4))
    assert np.max(L) <= 1e-6
    assert np.all(np.abs(rotated_signal(zl.zeros, CHI4)) <= 1e-7)


def test_mean_spacing_k3():
    zl = find_zeros(get_character(3), 1000, 1100)
    spacing = np.mean(np.diff(zl.zeros))
    assert abs(spacing * mean_density(1050, 3) - 1) < 0.02


def test_empty_window():
    zl = find_zeros(CHI4, 50.0, 50.0)
    assert len(zl) == 0


def test_scan_step_validation():
    with pytest.raises(ValueError):
        find_zeros(CHI4, 10, 20, scan_step=5.0)
    with pytest.raises(ValueError):
        find_zeros(CHI4, 10, 4e4)


def test_real_character_scans_agree():
    chi = get_character(5, "2")  # the quadratic character mod 5
    assert chi.is_real
    a = find_zeros(chi, 100, 300)
    b = find_zeros(chi, 100, 300, scan_step=0.5 * a.scan_step)
    assert len(a) == len(b) and np.max(np.abs(a.zeros - b.zeros)) < 1e-8


def test_conjugate_character_zeros():
    chi = get_character(5, "1")
    zc = find_zeros(chi.conj(), 10, 80)
    # L(1/2 - i g, chi) = conj(L(1/2 + i g, conj chi)) = 0
    assert np.max(np.abs(l_value(0.5 - 1j * zc.zeros, chi))) < 1e-6


def test_parallel_matches_serial():
    a = find_zeros(CHI4, 100, 400)
    b = find_zeros(CHI4, 100, 400, workers=2)
    assert np.array_equal(a.zeros, b.zeros)


def test_zero_file_round_trip(tmp_path):
    zl = find_zeros(get_character(5, "1"), 5, 60)
    path = tmp_path / "z.txt"
    zl.save(path)
    text = path.read_text().splitlines()
    assert text[0] == "# k=5" and text[1] == "# label=1"
    back = ZeroList.load(path)
    assert np.array_equal(back.zeros, zl.zeros)
    assert back.character == zl.character and back.t_max == 60.0


def test_zero_list_must_increase():
    with pytest.raises(ValueError):
        ZeroList(CHI4, 0, 10, np.array([3.0, 2.0]))


def test_unfolded_spacing_in_blocks(zeros_k4_large):
    zl, _ = zeros_k4_large
    E = zl.zeros
    for start in range(0, E.size - 500, 500):
        block = E[start : start + 501]
        mean_gap = (block[-1] - block[0]) / 500
        assert 0.97 <= mean_gap * mean_density(0.5 * (block[0] + block[-1]), 4) <= 1.03


def test_audit_against_smooth_count(zeros_k4_large):
    zl, _ = zeros_k4_large
    assert zl.audit_passed
    assert all(abs(a.found - a.expected) <= 2 for a in zl.audit)


def test_level_repulsion(zeros_k4_large):
    emp = empirical_r2(zeros_k4_large[0], 0.1, 3.0)
    assert emp.density[0] <= 0.15
    assert np.all(emp.density >= 0)


def test_pair_sum_rule(zeros_k4_large):
    emp = empirical_r2(zeros_k4_large[0], 0.1, 3.0)
    integral = np.sum(emp.density) * emp.bin_width
    expected = quad(gue_r2, 0, 3, limit=200)[0]
    assert abs(integral / expected - 1) < 0.05


def test_poisson_surrogate_is_flat(zeros_k4_large):
    sur = poisson_surrogate(zeros_k4_large[0], seed=1)
    emp = empirical_r2(sur, 0.1, 3.0)
    assert np.all(np.abs(emp.density - 1) <= 3 * emp.stderr)
    report = compare_histograms(emp, predicted_histogram(emp))
    assert not report["gue_consistent"]


def test_histogram_matches_prediction(zeros_k4_large):
    emp = empirical_r2(zeros_k4_large[0], 0.1, 3.0)
    report = compare_histograms(emp, predicted_histogram(emp))
    assert report["mad"] <= 0.05 and report["gue_consistent"]
    assert len(report["z_scores"]) == 30
    assert len(emp.csv_rows()) == 30


def test_empirical_r2_validation(zeros_k4_large):
    with pytest.raises(ValueError, match="1000"):
        empirical_r2(find_zeros(CHI4, 10, 100))
    with pytest.raises(ValueError):
        empirical_r2(zeros_k4_large[0], bin_width=0)


def test_unfolding_windows_bound_density_variation():
    edges = unfolding_windows(500, 2e4, 4)
    d = np.log(4 * edges / (2 * np.pi))
    assert np.all(d[1:] / d[:-1] <= 1.01 + 1e-12)
    assert edges[0] == 500 and edges[-1] == 2e4


def test_oscillating_density_trivial_cutoff():
    assert np.all(oscillating_density([900.0, 1000.0], CHI4, 1, 0.2) == 0)


def test_explicit_formula_converges(zeros_k4_window):
    check = explicit_density_check(zeros_k4_window, 1000, 200, 10**4, 0.35)
    assert check.relative_deviation <= 0.10


def test_explicit_formula_narrow_smoothing_needs_more_primes(zeros_k4_window):
    with pytest.warns(TruncationWarning, match="recommended"):
        coarse = explicit_density_check(zeros_k4_window, 1000, 200, 10**4, 0.2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        fine = explicit_density_check(zeros_k4_window, 1000, 200, 10**6, 0.2)
    assert fine.relative_deviation <= 0.10
    assert fine.relative_deviation < coarse.relative_deviation


def test_explicit_formula_wide_smoothing(zeros_k4_window):
    check = explicit_density_check(zeros_k4_window, 1000, 200, 10**4, 5.0)
    assert check.deviation_l2 < 1e-4
    assert np.allclose(check.empirical, check.smooth, atol=1e-4)


def test_explicit_formula_window_validation(zeros_k4_window):
    with pytest.raises(ValueError):
        explicit_density_check(zeros_k4_window, 1200, 200, 10**3, 0.5)
