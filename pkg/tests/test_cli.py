import csv
import json

from quadbetti.cli import main
from quadbetti.complexes import curated_complexes


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr()


def test_analyze_with_figures(capsys, fixture_path, tmp_path):
    code, out = run(capsys, "analyze", fixture_path("two_conic.json"), "--oracle", "--plot-dir", tmp_path)
    assert code == 0
    report = json.loads(out.out)
    assert report["instance_bound"]["value"] == 4 and report["oracle"]["total"] == 4
    assert (tmp_path / "two_conic_circle.png").stat().st_size > 0
    rows = list(csv.DictReader(open(tmp_path / "two_conic_circle.csv")))
    assert sum(r["kind"] == "root" for r in rows) == 6


def test_analyze_band_writes_curve(capsys, fixture_path, tmp_path):
    out_file = tmp_path / "r.json"
    code, _ = run(capsys, "analyze", fixture_path("band.json"), "--plot-dir", tmp_path, "--out", out_file)
    assert code == 0
    report = json.loads(out_file.read_text())
    assert report["analysis"]["curve_components"] == 2 and report["instance_bound"]["value"] == 0
    assert (tmp_path / "band_curve.png").exists() and (tmp_path / "band_curve.csv").exists()


def test_analyze_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 1, "forms": [[["1", "x"], ["x", "1"]]]}')
    assert run(capsys, "analyze", bad)[0] == 1
    assert run(capsys, "analyze", tmp_path / "missing.json")[0] == 1
    assert run(capsys, "bounds")[0] == 1
    assert run(capsys, "bounds", 0, 3)[0] == 1


def test_analyze_failed_certificate_exit_code(capsys, tmp_path):
    # equal forms: every root of the circle polynomial is double at eps = 0
    path = tmp_path / "equal.json"
    path.write_text('{"n": 1, "forms": [[["1", "0"], ["0", "-1"]], [["1", "0"], ["0", "-1"]]]}')
    code, out = run(capsys, "analyze", path, "--eps0")
    assert code == 2 and json.loads(out.out)["instance_bound"] is None
    assert run(capsys, "analyze", path)[0] == 0


def test_bounds_csv_and_json(capsys, tmp_path):
    code, out = run(capsys, "bounds", 2, 3)
    rows = {r["label"]: r for r in csv.DictReader(out.out.splitlines())}
    assert code == 0 and rows["milnor_2n3^n"]["value"] == "162" and rows["numerical"]["value"] == "9"
    code, out = run(capsys, "bounds", 1, 6, "--format", "json")
    data = json.loads(out.out)
    assert next(b for b in data["bounds"] if b["label"] == "numerical")["value"] == 7
    code, out = run(capsys, "bounds", 4, 10, "--plot", tmp_path / "g.png")
    assert "reference_16n^3,16000" in out.out and (tmp_path / "g.png").exists()


def test_oracle_modes(capsys, fixture_path, tmp_path):
    code, out = run(capsys, "oracle", fixture_path("conic.json"))
    assert code == 0 and json.loads(out.out)["betti"] == [1, 1]
    path = tmp_path / "rp2.txt"
    curated_complexes("rp2_6").save(path)
    code, out = run(capsys, "oracle", path)
    assert json.loads(out.out)["betti"] == [1, 1, 1]
    code, out = run(capsys, "oracle", "--complex", "torus7")
    assert json.loads(out.out)["betti"] == [1, 2, 1]
    code, out = run(capsys, "oracle", fixture_path("diag_pencil.json"))
    assert json.loads(out.out)["empty"] is True


def test_oracle_unstable_exit_code(capsys, fixture_path):
    # a one-rung ladder can never confirm stability
    code, out = run(capsys, "oracle", fixture_path("conic.json"), "--resolution", 8, "--max-resolution", 8)
    assert code == 3 and json.loads(out.out)["stable"] is False


def test_gen_and_compare(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "gen", "--seed", 4, "--k", 2, "--n", 2, "--out", a)
    run(capsys, "gen", "--seed", 4, "--k", 2, "--n", 2, "--out", b)
    assert a.read_text() == b.read_text()
    assert run(capsys, "analyze", a)[0] == 0
    code, out = run(capsys, "compare", "--seeds", "0..3", "--k", 2, "--n", 2, "--plot", tmp_path / "c.png")
    rows = list(csv.DictReader(out.out.splitlines()))
    assert code == 0 and [r["seed"] for r in rows] == ["0", "1", "2", "3"]
    assert all(int(r["oracle_total"]) <= int(r["instance_bound"]) <= 4 for r in rows)
    assert (tmp_path / "c.png").exists()
    assert run(capsys, "compare", "--seeds", "3..1", "--k", 2, "--n", 2)[0] == 1
