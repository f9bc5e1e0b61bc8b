"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 Failed certificate, 3 oracle unstable.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from . import instance as inst
from .bounds import all_closed_form, reference_constants
from .complexes import CURATED, curated_complexes, oracle_betti
from .errors import InputError
from .homology import SimplicialComplex, betti_z2
from .qform import as_fraction
from .report import COMPARE_COLUMNS, AnalysisOptions, analyze, compare_rows, exit_code

EXIT_OK, EXIT_INPUT, EXIT_FAILED, EXIT_UNSTABLE = 0, 1, 2, 3


def _rational(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _seed_range(text: str) -> List[int]:
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError("expected A..B with integers A <= B") from None
    if hi < lo:
        raise argparse.ArgumentTypeError("expected A..B with A <= B")
    return list(range(lo, hi + 1))


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv_text(rows, columns) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({c: row.get(c, "") for c in columns})
    return buf.getvalue()


# -- analyze -------------------------------------------------------------------


def cmd_analyze(args) -> int:
    instance = inst.load(args.file)
    options = AnalysisOptions(
        epsilon=args.epsilon,
        seed=args.seed,
        magnitude=args.magnitude,
        eps0=args.eps0,
        oracle=args.oracle,
        resolution=args.resolution,
        tau=args.tau,
        timing=args.timing,
    )
    if options.eps0 and options.epsilon is not None:
        raise InputError("--eps0 and --epsilon are mutually exclusive")
    report = analyze(instance, options)
    if args.plot_dir:
        report["figures"] = _analysis_figures(instance, report, Path(args.plot_dir), Path(args.file).stem)
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return exit_code(report)


def _analysis_figures(instance, report, outdir: Path, stem: str) -> dict:
    """Re-run the accepted analysis once to get plot data; write CSV + PNG."""
    from . import plotting
    from .net import analyze_net
    from .pencil import index_profile, root_directions
    from .qform import QForm

    outdir.mkdir(parents=True, exist_ok=True)
    cert = report.get("certificate")
    if not cert or report.get("analysis") is None:
        return {}
    sys_ = instance.system
    p = QForm.from_matrix([[as_fraction(a) for a in row] for row in cert["p"]])
    eps = as_fraction(cert["epsilon"])
    files = {}
    if sys_.k == 2:
        a = index_profile(sys_, eps, p)
        rows = [{"kind": "root", "x": x, "y": y, "label": ""} for x, y in root_directions(a)]
        rows += [{"kind": "arc", "x": "", "y": "", "label": lbl} for lbl in a.labels]
        csv_path = outdir / f"{stem}_circle.csv"
        csv_path.write_text(_csv_text(rows, ["kind", "x", "y", "label"]))
        png = plotting.plot_pencil(a, outdir / f"{stem}_circle.png")
    else:
        a = analyze_net(sys_, eps, p)
        csv_path = outdir / f"{stem}_curve.csv"
        csv_path.write_text(_csv_text(a.plot_rows(), ["kind", "x0", "y0", "z0", "x1", "y1", "z1", "label"]))
        png = plotting.plot_net(a, outdir / f"{stem}_curve.png")
    files["plot_data"] = str(csv_path)
    files["figure"] = str(png)
    return files


# -- bounds --------------------------------------------------------------------

BOUND_COLUMNS = ["k", "n", "label", "value", "exact", "parameters", "warning"]


def cmd_bounds(args) -> int:
    k, n = args.k, args.n
    if k < 1 or n < 1:
        raise InputError("k and n must be at least 1")
    rows = [b.as_dict() for b in all_closed_form(k, n)]
    if args.format == "json":
        out = {"k": k, "n": n, "bounds": rows, "reference_constants": reference_constants(n)}
        text = json.dumps(out, indent=2) + "\n"
    else:
        flat = [
            {"k": k, "n": n, "label": r["label"], "value": r["value"], "exact": r["exact"],
             "parameters": ";".join(f"{a}={b}" for a, b in r["parameters"].items()), "warning": r.get("warning", "")}
            for r in rows
        ]
        ref = _reference_row(k, n)
        if ref:
            flat.append(ref)
        text = _csv_text(flat, BOUND_COLUMNS)
    _emit(text, args.out)
    if args.plot:
        from .plotting import plot_bounds

        top = max(n, 8)
        ns = sorted({max(1, top // 2 ** i) for i in range(6)} | {n})
        plot_bounds(k, ns, args.plot)
    return EXIT_OK


_REFERENCE_KEYS = {1: ("B(1,n)", "n"), 2: ("B(2,n)", "2n"), 3: ("k3_refined", "n^2+n"), 4: ("k4_leading", "16n^3")}


def _reference_row(k: int, n: int) -> Optional[dict]:
    """Published reference value for this k, for contrast only (never a computed bound)."""
    if k not in _REFERENCE_KEYS:
        return None
    key, formula = _REFERENCE_KEYS[k]
    value = reference_constants(n)["at_n"][key]
    return {"k": k, "n": n, "label": f"reference_{formula}", "value": value, "exact": value,
            "parameters": f"n={n}", "warning": "report-only"}


# -- oracle --------------------------------------------------------------------


def cmd_oracle(args) -> int:
    if args.complex:
        cx = curated_complexes(args.complex)
        return _complex_report(cx, args.out, args.complex)
    if not args.file:
        raise InputError("give an instance/complex file or --complex NAME")
    text = Path(args.file).read_text() if Path(args.file).exists() else None
    if text is None:
        raise InputError(f"cannot read {args.file}")
    if text.lstrip().startswith("{"):
        instance = inst.loads(text)
        res = oracle_betti(instance.system, args.resolution, args.tau, args.max_resolution)
        out = {"mode": "variety", **res.as_dict()}
        _emit(json.dumps(out, indent=2) + "\n", args.out)
        return EXIT_OK if res.stable else EXIT_UNSTABLE
    return _complex_report(SimplicialComplex.from_text(text), args.out, args.file)


def _complex_report(cx: SimplicialComplex, out: Optional[str], name: str) -> int:
    b = betti_z2(cx)
    report = {"mode": "complex", "name": name, "vertices": cx.vertex_count, "facets": len(cx.maximal_simplices),
              "betti": list(b.betti), "total": b.total, "stable": True, "empty": b.total == 0}
    _emit(json.dumps(report, indent=2) + "\n", out)
    return EXIT_OK


# -- gen / compare ---------------------------------------------------------------


def cmd_gen(args) -> int:
    text = inst.generate(args.seed, args.k, args.n).to_json()
    _emit(text, args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    rows = compare_rows(args.seeds, args.k, args.n, oracle=not args.no_oracle, jobs=args.jobs)
    _emit(_csv_text(rows, COMPARE_COLUMNS), args.out)
    if args.plot:
        from .plotting import plot_compare

        plot_compare(rows, args.plot)
    failed = any(r["certificate"] == "Failed" for r in rows)
    return EXIT_FAILED if failed else EXIT_OK


# -- entry point -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quadbetti", description="Betti number bounds for real quadric intersections.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="certified instance bound for one instance file")
    a.add_argument("file")
    a.add_argument("--epsilon", type=_rational, help="fix eps instead of running the schedule")
    a.add_argument("--seed", type=int, help="use seeded random p from the first attempt")
    a.add_argument("--magnitude", type=_rational, help="noise magnitude for random p")
    a.add_argument("--eps0", action="store_true", help="analyze the unperturbed family (eps = 0)")
    a.add_argument("--oracle", action="store_true", help="also run the homology oracle (n <= 3)")
    a.add_argument("--resolution", type=int, help="first oracle resolution")
    a.add_argument("--tau", type=_rational, help="oracle threshold (squared angular radius)")
    a.add_argument("--plot-dir", help="write plot-data CSV and a figure here")
    a.add_argument("--timing", action="store_true", help="include wall-clock timings in the report")
    a.add_argument("--out", help="write the JSON report here instead of stdout")
    a.set_defaults(func=cmd_analyze)

    b = sub.add_parser("bounds", help="closed-form bounds for (k, n)")
    b.add_argument("k", type=int)
    b.add_argument("n", type=int)
    b.add_argument("--format", choices=("csv", "json"), default="csv")
    b.add_argument("--plot", help="write a growth figure (PNG/PDF) here")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bounds)

    o = sub.add_parser("oracle", help="Z/2 Betti numbers of X (instance) or of a complex file")
    o.add_argument("file", nargs="?")
    o.add_argument("--complex", choices=sorted(CURATED), help="use a curated complex")
    o.add_argument("--resolution", type=int)
    o.add_argument("--max-resolution", type=int)
    o.add_argument("--tau", type=_rational)
    o.add_argument("--out")
    o.set_defaults(func=cmd_oracle)

    g = sub.add_parser("gen", help="random instance file")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("compare", help="instance bounds vs closed-form bounds over a seed range")
    c.add_argument("--seeds", type=_seed_range, required=True, help="A..B, inclusive")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--no-oracle", action="store_true")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--plot", help="write a comparison figure here")
    c.add_argument("--out")
    c.set_defaults(func=cmd_compare)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors; ours is 1
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
