from collections import Counter
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gasketnet import asymptotics as asy
from gasketnet.words import L_value, normal_decomposition, omega, words_of_length, words_up_to


def enumerated_sum_omega(t):
    return sum(omega(w) for w in words_of_length(t))


def test_closed_form_counts():
    assert (asy.both_letters_count(3), asy.fixed_tail_count(3),
            asy.fixed_tail_both_count(3), asy.single_block_count(3)) == (6, 7, 3, 21)
    assert asy.single_block_count(1) == 3
    tab = asy.counting_table(30)
    for k in range(1, 31):
        assert 2 * tab.fixed_tail_both[k] == tab.both_letters[k]
        assert tab.single_block[k] == 3 * tab.fixed_tail[k]
    assert tab.sum_omega[3] == 33
    for k in range(1, 9):
        assert tab.single_block[k] == sum(len(set(w)) <= 2 for w in words_of_length(k))


def test_block_profile_examples():
    assert asy.block_profile_count((1, 2)) == 6
    assert asy.block_profile_count((3,)) == 21
    assert asy.block_profile_count((1, 2, 2)) == 12
    for bad in ((), (0,), (1, 1), (2, 3, 1)):
        with pytest.raises(ValueError):
            asy.block_profile_count(bad)


@pytest.mark.parametrize("t", range(1, 9))
def test_block_profiles_match_enumeration(t):
    hist = Counter(normal_decomposition(w).lengths for w in words_of_length(t))
    for prof, n in hist.items():
        assert asy.block_profile_count(prof) == n
    assert sum(hist.values()) == 3 ** t


@pytest.mark.parametrize("t", range(1, 11))
def test_sum_omega_matches_enumeration(t):
    assert asy.sum_omega(t) == enumerated_sum_omega(t)


def test_sum_omega_small():
    assert asy.sum_omega(1) == 3
    assert asy.sum_omega(3) == 33


def test_running_sums_equal_quadratic_convolution():
    count, total = asy.composition_sums_quadratic(80)
    for t in range(1, 81):
        assert count[t] == 3 ** t == asy.composition_totals(t)
        assert total[t] == asy.sum_omega(t)


def test_alpha_bar_values():
    assert asy.alpha_bar(0) == 0 == asy.alpha_bar(1) == asy.alpha_bar(2)
    assert asy.alpha_bar(3) == Fraction(2, 9)
    for t in range(1, 8):
        assert asy.alpha_bar(t) == Fraction(sum(L_value(w) for w in words_of_length(t)), 3 ** t)


def test_alpha_table_truncates():
    assert [s for _, _, s in asy.alpha_table(300, 800, 100)] == \
        ["0.2207", "0.2211", "0.2213", "0.2214", "0.2215", "0.2216"]
    assert asy.alpha_table(3, 3, 1)[0][2] == "0.0740"
    assert asy.alpha_table(1, 1, 1)[0][2] == "0.0000"
    with pytest.raises(ValueError):
        asy.alpha_table(0, 3, 1)


@given(st.integers(1, 100), st.integers(1, 100))
def test_superadditivity_with_slack(k1, k2):
    a = asy.alpha_bar
    assert a(k1) + a(k2) <= a(k1 + k2) <= a(k1) + a(k2) + 1


def test_alpha_bar_monotone_and_below_limit():
    s = asy.alpha_series(120)
    for m in range(1, 121):
        assert s.alpha_bar[m] >= s.alpha_bar[m - 1]
        assert s.alpha_bar[m] / m < asy.ALPHA_STAR
    assert s.alpha_star_estimate == s.alpha_bar[120] / 120


def test_kappa_values():
    assert asy.kappa(2) == 0
    assert asy.kappa(3) == Fraction(3, 20)
    for t in range(0, 7):
        ws = list(words_up_to(t))
        assert asy.kappa(t) == Fraction(sum(L_value(w) for w in ws), len(ws))


def test_chi_values():
    assert asy.chi(1) == Fraction(3, 4)
    for t in range(1, 40):
        direct = Fraction(sum(k * 3 ** k for k in range(t + 1)),
                          t * sum(3 ** k for k in range(t + 1)))
        assert asy.chi(t) == direct
    assert all(asy.chi(t) <= 1 for t in range(1, 10_001, 97))
    assert abs(asy.chi(1000) - 1) < Fraction(1, 100)


def test_gap_distribution():
    assert asy.gap_pmf(1) == 0 and asy.gap_pmf(2) == Fraction(2, 9)
    assert abs(asy.gap_mean_partial(120) - asy.MEAN_GAP) < Fraction(1, 10 ** 8)
    mass = sum(asy.gap_pmf(k) for k in range(2, 200))
    assert 0 < 1 - mass < Fraction(2, 3) ** 190


def test_renewal_expectations_small():
    ey = asy.renewal_expectations(10)
    assert ey[0] == ey[1] == 0
    assert ey[2] == Fraction(2, 9)
    assert ey[4] == Fraction(2, 3)
    assert ey == asy.renewal_expectations_recursive(10)


def test_renewal_exact_model():
    m = asy.renewal_exact(2000)
    assert m.mean_s == Fraction(9, 2)
    assert m.s_pmf[2] == Fraction(2, 9)
    assert abs(m.ratio(2000) - Fraction(2, 9)) < Fraction(1, 100)
    assert all(m.ey[t] >= m.ey[t - 1] for t in range(1, 2001))


def test_worked_renewal_scan():
    assert asy.scan_renewals("321223121") == [4, 3, 2]


@pytest.mark.parametrize("t", range(0, 9))
def test_renewal_mean_matches_exhaustive_scan(t):
    total = sum(len(asy.scan_renewals("".join(x))) for x in product("123", repeat=t))
    assert Fraction(total, 3 ** t) == asy.renewal_expectations(t)[t]


def test_mc_trivial_and_errors():
    est = asy.renewal_mc(1, 1000, seed=3)
    assert est.estimate == 0.0
    with pytest.raises(ValueError):
        asy.renewal_mc(10, 0)


def test_mc_deterministic_and_thread_independent():
    a = asy.renewal_mc(50, 10_000, seed=9, threads=1)
    b = asy.renewal_mc(50, 10_000, seed=9, threads=3)
    assert a == b
    assert asy.renewal_mc(50, 10_000, seed=10) != a


def test_mc_agrees_with_exact():
    ey = asy.renewal_expectations(200)[200]
    est = asy.renewal_mc(200, 100_000, seed=77)
    assert abs(est.estimate - float(ey)) < 4 * est.std_err


def test_sandwich():
    r = asy.renewal_sandwich(3)
    assert r.holds
    r = asy.renewal_sandwich(10)
    assert r.normalized_sum == Fraction(enumerated_sum_omega(10), 3 ** 10)
    r = asy.renewal_sandwich(500)
    assert r.holds
    assert abs(r.renewal_sum / 500 - asy.ALPHA_STAR) < Fraction(2, 100)
    assert abs(r.normalized_sum / 500 - asy.ALPHA_STAR) < Fraction(2, 100)
    with pytest.raises(ValueError):
        asy.renewal_sandwich(2)
    assert all(r.holds for r in asy.sandwich_range(3, 200))
