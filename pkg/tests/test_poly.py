from fractions import Fraction

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from quadbetti.poly import (
    MPoly,
    Poly,
    berkowitz,
    count_real_roots,
    det,
    is_squarefree,
    isolate_real_roots,
    poly_gcd,
    sign_variations,
    sturm_chain,
)

rationals = st.fractions(min_value=-8, max_value=8, max_denominator=12)


def from_roots(roots):
    f = Poly.const(1)
    for r in roots:
        f = f * Poly([-r, 1])
    return f


def test_arithmetic_and_trim():
    f = Poly([1, 2, 0, 0])
    assert f.degree == 1 and f.c == [1, 2]
    assert (f * f).c == [1, 4, 4]
    assert (f - f).is_zero() and Poly().degree == -1
    q, r = Poly([-4, 0, 1]).divmod(Poly([-2, 1]))
    assert q == Poly([2, 1]) and r.is_zero()


def test_gcd_and_squarefree():
    g = poly_gcd(from_roots([1, 2, 2]), from_roots([2, 3]))
    assert g.monic() == from_roots([2])
    assert not is_squarefree(from_roots([1, 1]))
    assert is_squarefree(Poly([1, 0, 1]))


def test_sturm_small_cases():
    assert count_real_roots(Poly([1, 0, 1])) == 0
    assert count_real_roots(Poly([-4, 0, 1])) == 2
    (a1, b1), (a2, b2) = isolate_real_roots(Poly([-4, 0, 1]))
    assert a1 < -2 < b1 <= a2 < 2 < b2


def test_sign_variations_skips_zeros():
    assert sign_variations([1, 0, -1, 0, 1]) == 2
    assert sign_variations([0, 0]) == 0


@settings(max_examples=60, deadline=None)
@given(st.lists(rationals, min_size=1, max_size=6, unique=True), st.integers(0, 2))
def test_isolation_matches_known_roots(roots, complex_pairs):
    f = from_roots(roots)
    for _ in range(complex_pairs):
        f = f * Poly([1, 0, 1])  # no real roots added
    assert count_real_roots(f) == len(roots)
    intervals = isolate_real_roots(f)
    assert len(intervals) == len(roots)
    for (a, b), r in zip(intervals, sorted(roots)):
        assert a < r < b
        assert f(a) != 0 and f(b) != 0


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5).flatmap(lambda d: st.lists(st.lists(rationals, min_size=d, max_size=d), min_size=d, max_size=d)))
def test_berkowitz_matches_sympy(rows):
    m = sympy.Matrix(rows)
    expected = [Fraction(int(c.p), int(c.q)) for c in reversed(m.charpoly().all_coeffs())]
    assert berkowitz(rows, Fraction(1), Fraction(0)) == expected
    assert det(rows, Fraction(1), Fraction(0)) == Fraction(str(m.det()))


def test_berkowitz_over_polynomials():
    t = Poly.x()
    # det([[t, 1], [1, t]]) = t^2 - 1
    assert det([[t, Poly.const(1)], [Poly.const(1), t]], Poly.const(1), Poly()) == Poly([-1, 0, 1])


def test_mpoly_evaluate_and_specialize():
    x, y = MPoly.var(2, 0), MPoly.var(2, 1)
    f = x * x * y - y + 3
    assert f.evaluate([2, 5]) == 18
    assert f.specialize_last([2]) == Poly([3, 3])


@settings(max_examples=150, deadline=None)
@given(st.lists(rationals, min_size=1, max_size=4), st.lists(rationals, min_size=0, max_size=3), st.sampled_from([1, -1, Fraction(-3, 7)]))
def test_gcd_recovers_repeated_roots(simple, doubled, lead):
    simple = [r for r in set(simple) if r not in doubled]
    f = Poly([lead])
    for r in simple:
        f = f * Poly([-r, 1])
    for r in set(doubled):
        f = f * Poly([-r, 1]) * Poly([-r, 1])
    g = poly_gcd(f, f.derivative())
    assert g.degree == len(set(doubled))
    assert is_squarefree(f) == (not doubled)
    # Sturm counts distinct real roots even with multiplicities
    assert count_real_roots(f) == len(simple) + len(set(doubled))


@settings(max_examples=100, deadline=None)
@given(st.lists(rationals, min_size=2, max_size=7), rationals)
def test_sturm_chain_signs_match_rational_evaluation(coeffs, t):
    f = Poly(coeffs)
    if f.degree < 1:
        return
    chain = sturm_chain(f)
    # integer chain elements are positive multiples of the classical ones
    ratio = chain[0].lead() / f.lead()
    assert ratio > 0 and chain[0].c == [a * ratio for a in f.c]
    classical = [f, f.derivative()]
    while True:
        r = classical[-2].divmod(classical[-1])[1]
        if r.is_zero():
            break
        classical.append(-r)
    assert len(classical) == len(chain)
    for a, b in zip(classical, chain):
        assert (a(t) > 0) == (b(t) > 0) and (a(t) == 0) == (b(t) == 0)
