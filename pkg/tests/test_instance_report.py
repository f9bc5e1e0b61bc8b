import json
from fractions import Fraction

import pytest

from quadbetti import instance as inst
from quadbetti.errors import InputError
from quadbetti.report import AnalysisOptions, analyze, compare_row, exit_code


def test_parse_and_round_trip(fixture_path):
    a = inst.load(fixture_path("two_conic.json"))
    assert a.system.k == 2 and a.system.n == 2 and a.name == "two-conic"
    b = inst.loads(a.to_json())
    assert b.system == a.system


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        '{"forms": []}',
        '{"n": 1, "forms": [[["1", "2"], ["3", "1"]]]}',
        '{"n": 1, "forms": [[["1", "0"]]]}',
        '{"n": 1, "forms": [[[0.5, 0], [0, 1]]]}',
        '{"n": 1, "forms": [[["1", "0"], ["0", "1"]]], "epsilon": "-1"}',
    ],
)
def test_malformed_instances(text):
    with pytest.raises(InputError):
        inst.loads(text)


def test_generator_is_deterministic():
    a, b = inst.generate(7, 3, 2), inst.generate(7, 3, 2)
    assert a.to_json() == b.to_json()
    assert inst.generate(8, 3, 2).to_json() != a.to_json()
    for q in a.system.forms:
        assert all(abs(x) <= 1 and x.denominator <= 64 for x in q.entries)


def test_report_two_conic(fixture_path):
    r = analyze(inst.load(fixture_path("two_conic.json")), AnalysisOptions(oracle=True))
    assert r["mode"] == "pencil" and r["instance_bound"]["value"] == 4
    assert r["oracle"]["total"] == 4 and r["soundness"]["oracle_le_bound"]
    assert (r["mu"], r["nu"]) == (2, 1)
    assert json.loads(json.dumps(r)) == r
    assert "timing" not in r
    assert exit_code(r) == 0


def test_report_band(fixture_path):
    r = analyze(inst.load(fixture_path("band.json")), AnalysisOptions(timing=True))
    assert r["mode"] == "net" and r["instance_bound"]["value"] == 0
    assert r["analysis"]["curve_components"] == 2 and r["stabilized"] is True
    assert set(r["timing"]) >= {"analysis", "total"}


def test_report_k1_and_k5():
    r1 = analyze(inst.generate(1, 1, 3))
    assert r1["mode"] == "k1" and r1["instance_bound"]["value"] == 4 and r1["genericity"]["det_nonzero"]
    r5 = analyze(inst.generate(1, 5, 2))
    assert r5["mode"] == "closed_form_only" and r5["numerical_bound"]["value"] == 10229
    assert r5["instance_bound"] is None


def test_reports_are_deterministic():
    a = inst.generate(3, 3, 2)
    assert analyze(a) == analyze(a)


def test_instance_epsilon_is_used():
    a = inst.generate(2, 2, 2)
    fixed = inst.Instance(a.system, epsilon=Fraction(1, 100))
    r = analyze(fixed)
    assert r["certificate"]["epsilon"] == "1/100"


def test_compare_row_columns():
    row = compare_row(4, 2, 2)
    assert row["certificate"] == "TransversalK2"
    assert row["instance_bound"] <= 4 and row["oracle_stable"] is True
    assert row["slack_oracle"] >= 0
    with pytest.raises(InputError):
        compare_row(0, 4, 2)
