from fractions import Fraction
from math import ceil, comb

import pytest

from quadbetti.bounds import (
    all_closed_form,
    barvinok_symbolic,
    basu_s,
    ci_betti,
    ci_betti_bound,
    det_variety_bound,
    hirzebruch_chi,
    milnor_projective,
    milnor_quadrics,
    numerical_bound,
    reference_constants,
    spherical_bound,
    spherical_bound_exact,
    topological_bound_from_data,
)
from quadbetti.errors import InputError
from quadbetti.strata import sigma_k


def test_milnor():
    assert milnor_projective(3, 2) == 54 == 3 * 2 * 3 ** 2
    assert milnor_quadrics(3) == 162 == 2 * 3 * 3 ** 3
    assert all(milnor_quadrics(n) == 3 * milnor_projective(n, 2) for n in range(1, 20))
    assert milnor_projective(5, 1) == 5
    assert milnor_projective(1, 3) == 3
    assert all(milnor_projective(n, 2) == 2 * n * 3 ** (n - 1) for n in range(1, 20))


def test_basu():
    assert basu_s(1, 2).exact == 7
    assert basu_s(1, 1).exact == Fraction(5, 2) and basu_s(1, 1).value == 3


def test_basu_growth_exponent():
    # log s(k, 2n) / s(k, n) / log 2 tends to k + 1
    for k in (1, 2, 3):
        ratio = basu_s(k, 4096).exact / basu_s(k, 2048).exact
        assert abs(float(ratio) - 2 ** (k + 1)) / 2 ** (k + 1) < 0.01


def test_det_variety_bound():
    assert det_variety_bound(2, 4, 4, 3) == 18
    assert det_variety_bound(1, 3, 1, 1) == 3
    assert det_variety_bound(5, 3, 3, 2) == 45
    with pytest.raises(InputError):
        det_variety_bound(1, 3, 4, 1)


def test_hirzebruch_examples():
    assert hirzebruch_chi(2, 2) == 4
    assert hirzebruch_chi(3, 2) == 0
    assert all(hirzebruch_chi(2, d) == 2 * d for d in range(1, 30))


def test_hirzebruch_sweep_consistent():
    # both evaluations are compared internally; a mismatch raises
    for k in range(2, 9):
        for d in range(1, 13):
            hirzebruch_chi(k, d)


def test_ci_betti():
    assert ci_betti(3, 2) == 4
    assert ci_betti(2, 2) == 4
    assert ci_betti(2, 1) == 2


def test_ci_betti_bound():
    assert ci_betti_bound(3, 2).exact == 14
    assert ci_betti_bound(2, 5).exact == Fraction(41, 4) and ci_betti_bound(2, 5).value == 11
    for k in range(2, 7):
        for d in range(1, 21):
            assert ci_betti_bound(k, d).value >= ci_betti(k, d)


def test_spherical():
    assert spherical_bound_exact(2, 5) == 10 + Fraction(1, 8)
    assert spherical_bound(2, 5).value == 11
    assert all(spherical_bound(1, d).value == 1 for d in range(1, 10))
    n = 50
    exact = spherical_bound_exact(4, n + 1)
    assert exact == 8 * (n + 1) ** 3 + Fraction(10, 8) * (6 * (n + 1)) ** 2


def test_numerical():
    assert all(numerical_bound(1, n).exact == n + 1 for n in range(1, 20))
    assert numerical_bound(2, 3).exact == 4 + spherical_bound_exact(2, 4) / 2
    for k in range(1, 6):
        n = 7
        expected = (n + 1) + sum(spherical_bound_exact(k, n - r + 2) for r in range(1, sigma_k(k) + 1)) / 2
        assert numerical_bound(k, n).exact == expected
        assert numerical_bound(k, n).value == ceil(expected)


def test_numerical_growth_bounded():
    for k in (2, 3, 4):
        scaled = [numerical_bound(k, n).exact / Fraction(n) ** (k - 1) for n in (16, 32, 64, 128, 256)]
        assert max(scaled) / min(scaled) < 2


def test_topological_bound():
    assert topological_bound_from_data(2, 2, 1, [6]).exact == 4
    assert topological_bound_from_data(1, 2, 0, [4]).exact == 0
    assert topological_bound_from_data(5, 3, 3, []).exact == 6
    odd = topological_bound_from_data(2, 1, 1, [3])
    assert odd.value == 5 and odd.warning
    with pytest.raises(InputError):
        topological_bound_from_data(2, 0, 1, [])


def test_monotone_in_n():
    for k in range(1, 6):
        for label in ("milnor", "milnor_2n3^n", "basu_s", "numerical"):
            values = [next(b.exact for b in all_closed_form(k, n) if b.label == label) for n in range(1, 21)]
            assert values == sorted(values)


def test_reference_constants():
    ref = reference_constants(7)
    assert ref["report_only"] is True
    assert ref["c_k"]["2"] == "2" and ref["c_k"]["6"] == "2/15"
    assert ref["at_n"]["B(2,n)"] == 14
    assert reference_constants(4)["at_n"]["k3_refined"] == 20
    assert barvinok_symbolic() == "n^(O(k))"


def test_all_closed_form_labels():
    labels = [b.label for b in all_closed_form(4, 10)]
    assert labels == ["milnor", "milnor_2n3^n", "basu_s", "numerical", "spherical_r1", "spherical_r2", "ci_betti_bound"]
    assert all(b.value >= b.exact for b in all_closed_form(4, 10))
    assert comb(5, 3) == 10  # the binomial in the k=4 spherical term
