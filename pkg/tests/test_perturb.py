from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load_fixture
from quadbetti.errors import InputError
from quadbetti.instance import random_system
from quadbetti.net import analyze_net
from quadbetti.pencil import index_profile
from quadbetti.perturb import (
    Certificate,
    PerturbationCert,
    certify,
    critical_epsilon,
    default_magnitude,
    default_p,
    epsilon_schedule,
    epsilon_start,
    genericity_check,
    guided_start,
    randomize_p,
)
from quadbetti.qform import Inertia, QForm, QuadricSystem, inertia_descartes


def test_default_p():
    assert default_p(1) == QForm.diag([1, 1])
    assert default_p(3) == QForm.identity(4)
    assert all(inertia_descartes(default_p(n)) == Inertia(n + 1, 0, 0) for n in range(6))


def test_randomize_p_basics():
    assert randomize_p(3, 2, 0) == QForm.identity(3)
    assert randomize_p(1, 3, Fraction(1, 8)) != randomize_p(2, 3, Fraction(1, 8))
    assert randomize_p(1, 3, Fraction(1, 8)) == randomize_p(1, 3, Fraction(1, 8))
    with pytest.raises(InputError):
        randomize_p(0, 2, 1)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 7))
def test_randomize_p_positive_definite(seed, n):
    for mag in (Fraction(1, 2 * (n + 1) ** 2), default_magnitude(n)):
        p = randomize_p(seed, n, mag)
        assert inertia_descartes(p).pos == n + 1
        assert all(abs(a - (1 if i == j else 0)) <= mag for i, row in enumerate(p.matrix()) for j, a in enumerate(row))


def test_cert_requires_positive_definite_p():
    with pytest.raises(AssertionError):
        PerturbationCert(QForm.diag([1, -1]), Fraction(1, 4), 1, Certificate.TRANSVERSAL_K2)
    with pytest.raises(AssertionError):
        PerturbationCert(QForm.identity(2), Fraction(0), 1, Certificate.TRANSVERSAL_K2)


def test_schedule_diag_pencil():
    res = epsilon_schedule(load_fixture("diag_pencil"), default_p(1), index_profile, confirm=True)
    assert res.epsilon is not None and res.analysis.root_count == 4


def test_schedule_constant_rank():
    res = epsilon_schedule(load_fixture("constant_rank"), default_p(1), index_profile)
    assert res.analysis.root_count == 0 and res.analysis.bound.value == 2


def test_scale_invariance():
    sys = load_fixture("two_conic")
    tiny = QuadricSystem(sys.n, tuple(q.scale(Fraction(1, 2 ** 30)) for q in sys.forms))
    c1, a1 = certify(sys, index_profile, Certificate.TRANSVERSAL_K2, confirm=True)
    c2, a2 = certify(tiny, index_profile, Certificate.TRANSVERSAL_K2, confirm=True)
    assert a1.signature == a2.signature
    assert c2.epsilon == c1.epsilon / 2 ** 30
    assert epsilon_start(tiny) == epsilon_start(sys) / 2 ** 30


def test_guided_start_sits_below_critical_value():
    for seed in range(5):
        sys = random_system(seed, 2, 2)
        crit = critical_epsilon(sys, default_p(2))
        assert crit is not None
        assert guided_start(sys, default_p(2)) <= crit / 4


def test_false_plateau_is_skipped():
    # this pencil keeps a 4-root signature for eps in [1/8, 1/2] and has 2 roots below ~0.066
    sys = random_system(0, 2, 2)
    cert, a = certify(sys, index_profile, Certificate.TRANSVERSAL_K2, confirm=True)
    assert a.root_count == 2 and a.bound.value == 2
    assert index_profile(sys, cert.epsilon / 1024, default_p(2)).signature == a.signature


def test_triple_confirmation():
    for seed in range(6):
        sys = random_system(seed, 2, 3)
        cert, a = certify(sys, index_profile, Certificate.TRANSVERSAL_K2, confirm=True)
        for div in (2, 4):
            assert index_profile(sys, cert.epsilon / div, cert.p).root_count == a.root_count


def test_genericity_check():
    two_conic = load_fixture("two_conic")
    assert genericity_check(two_conic, default_p(2), 0, index_profile) == (True, "")
    ok, reason = genericity_check(load_fixture("diagonal_net"), default_p(2), Fraction(1, 8), analyze_net)
    assert not ok and reason == "corank2"
    p = randomize_p(1, 2, default_magnitude(2))
    assert genericity_check(load_fixture("diagonal_net"), p, Fraction(1, 8), analyze_net)[0]


def test_eps0_certificate_matches_perturbed_limit():
    sys = load_fixture("two_conic")
    c0, a0 = certify(sys, index_profile, Certificate.TRANSVERSAL_K2, eps0=True)
    c1, a1 = certify(sys, index_profile, Certificate.TRANSVERSAL_K2, confirm=True)
    assert c0.certificate == Certificate.GENERIC_EPS0 and c0.epsilon == 0
    assert a0.bound == a1.bound and a0.signature == a1.signature


def test_eps0_failure_is_not_retried():
    # equal forms: the circle polynomial is a perfect square at eps = 0
    q = QForm.diag([1, -1])
    cert, a = certify(QuadricSystem(1, (q, q)), index_profile, Certificate.TRANSVERSAL_K2, eps0=True)
    assert a is None and cert.certificate == Certificate.FAILED and cert.attempts == 1


def test_reproducible_with_seed():
    sys = random_system(11, 3, 2)
    c1, a1 = certify(sys, analyze_net, Certificate.STABLE_K3, seed=5, confirm=True)
    c2, a2 = certify(sys, analyze_net, Certificate.STABLE_K3, seed=5, confirm=True)
    assert c1 == c2 and a1.signature == a2.signature
