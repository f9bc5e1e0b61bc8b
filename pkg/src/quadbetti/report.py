"""Orchestration: instance -> certificate -> analysis -> bounds (-> oracle).

Reports are plain dicts of JSON types, so ``json.loads(json.dumps(r)) == r``.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional

from .bounds import (
    BoundReport,
    all_closed_form,
    basu_s,
    milnor_projective,
    numerical_bound,
    reference_constants,
)
from .complexes import oracle_betti
from .errors import InputError
from .instance import Instance, random_system
from .net import analyze_net
from .pencil import index_profile
from .perturb import Certificate, certify
from .qform import QuadricSystem, determinant, fraction_str
from .strata import sigma_k

log = logging.getLogger(__name__)

FORMAT_VERSION = 1


@dataclass(frozen=True)
class AnalysisOptions:
    epsilon: Optional[Fraction] = None
    seed: Optional[int] = None
    magnitude: Optional[Fraction] = None
    eps0: bool = False
    oracle: bool = False
    resolution: Optional[int] = None
    max_resolution: Optional[int] = None
    tau: Optional[Fraction] = None
    timing: bool = False


def _analyzer(k: int):
    if k == 2:
        return index_profile, Certificate.TRANSVERSAL_K2
    return analyze_net, Certificate.STABLE_K3


def _closed_form_block(k: int, n: int) -> dict:
    return {
        "bounds": [b.as_dict() for b in all_closed_form(k, n)],
        "reference_constants": reference_constants(n),
    }


def run_analysis(sys: QuadricSystem, options: AnalysisOptions = AnalysisOptions(), p0=None):
    """Certificate and analysis for k in {2, 3}; (cert, None) on failure."""
    analyzer, success = _analyzer(sys.k)
    return certify(
        sys,
        analyzer,
        success,
        seed=options.seed,
        magnitude=options.magnitude,
        epsilon=options.epsilon,
        eps0=options.eps0,
        confirm=True,
        p0=p0,
    )


def analyze(instance: Instance, options: AnalysisOptions = AnalysisOptions()) -> dict:
    """Full report for one instance; see the README for the schema."""
    sys = instance.system
    k, n = sys.k, sys.n
    if options.epsilon is None and instance.epsilon is not None:
        options = AnalysisOptions(**{**options.__dict__, "epsilon": instance.epsilon})
    if options.seed is None and instance.seed is not None:
        options = AnalysisOptions(**{**options.__dict__, "seed": instance.seed})
    timing: Dict[str, float] = {}
    t0 = time.perf_counter()
    report: dict = {
        "format_version": FORMAT_VERSION,
        "instance": instance.to_dict(),
        "k": k,
        "n": n,
        "sigma_k": sigma_k(k),
        "closed_form": _closed_form_block(k, n),
    }
    bound: Optional[BoundReport] = None
    if k == 1:
        det = determinant(sys.forms[0])
        bound = BoundReport("topological", Fraction(n + 1), {"n": n})
        report.update(
            mode="k1",
            certificate=None,
            genericity={"det_nonzero": det != 0, "det": fraction_str(det)},
            strata=[],
            mu=None,
            nu=None,
            instance_bound=bound.as_dict(),
            analysis=None,
            stabilized=True,
        )
    elif k in (2, 3):
        cert, analysis = run_analysis(sys, options, p0=instance.p)
        timing["analysis"] = time.perf_counter() - t0
        report["mode"] = "pencil" if k == 2 else "net"
        report["certificate"] = cert.as_dict()
        if analysis is None:
            report.update(strata=[], mu=None, nu=None, instance_bound=None, analysis=None, stabilized=False)
        else:
            bound = analysis.bound
            if k == 2:
                strata = [{"r": 1, "kind": "points", "root_count": analysis.root_count,
                           "betti": analysis.root_count}]
                stabilized = True
            else:
                strata = [{"r": 1, "kind": "curve", "components": analysis.curve_components,
                           "betti": analysis.betti_sigma}]
                stabilized = analysis.stabilized
            report.update(
                strata=strata,
                mu=analysis.mu,
                nu=analysis.nu,
                instance_bound=bound.as_dict(),
                analysis=analysis.as_dict(),
                stabilized=stabilized,
            )
    else:
        report.update(
            mode="closed_form_only",
            notice=f"k={k}: no geometric analysis for k >= 4; closed-form bounds only",
            certificate=None,
            strata=[],
            mu=None,
            nu=None,
            instance_bound=None,
            analysis=None,
            numerical_bound=numerical_bound(k, n).as_dict(),
            stabilized=None,
        )
    if options.oracle:
        t1 = time.perf_counter()
        if n > 3:
            report["oracle"] = {"skipped": "oracle supports n <= 3 only"}
        else:
            res = oracle_betti(sys, options.resolution, options.tau, options.max_resolution)
            report["oracle"] = res.as_dict()
            if bound is not None and res.stable:
                ok = res.betti.total <= bound.value
                report["soundness"] = {"oracle_le_bound": ok}
                if not ok:
                    log.error("oracle total %d exceeds the instance bound %d", res.betti.total, bound.value)
        timing["oracle"] = time.perf_counter() - t1
    if options.timing:
        timing["total"] = time.perf_counter() - t0
        report["timing"] = {key: round(v, 4) for key, v in timing.items()}
    return report


def exit_code(report: dict) -> int:
    cert = report.get("certificate")
    if cert is not None and cert["certificate"] == Certificate.FAILED.value:
        return 2
    return 0


# -- batch comparison ----------------------------------------------------------

COMPARE_COLUMNS = [
    "seed", "k", "n", "certificate", "epsilon", "mu", "nu", "betti_sigma",
    "instance_bound", "numerical_bound", "milnor", "basu",
    "oracle_total", "oracle_stable",
    "slack_numerical", "slack_milnor", "slack_oracle",
]


def compare_row(seed: int, k: int, n: int, oracle: bool = True) -> dict:
    """One CSV row: the instance bound next to the closed-form bounds."""
    if k not in (2, 3):
        raise InputError("compare needs k in {2, 3}")
    sys = random_system(seed, k, n)
    cert, analysis = run_analysis(sys)
    num = numerical_bound(k, n).value
    mil = milnor_projective(n, 2)
    bas = basu_s(k, n).value
    row = {c: "" for c in COMPARE_COLUMNS}
    row.update(seed=seed, k=k, n=n, certificate=cert.certificate.value, epsilon=fraction_str(cert.epsilon),
               numerical_bound=num, milnor=mil, basu=bas)
    inst = None
    if analysis is not None:
        inst = analysis.bound.value
        row.update(
            mu=analysis.mu, nu=analysis.nu,
            betti_sigma=analysis.root_count if k == 2 else analysis.betti_sigma,
            instance_bound=inst, slack_numerical=num - inst, slack_milnor=mil - inst,
        )
    if oracle and n <= 3:
        res = oracle_betti(sys)
        row.update(oracle_total=res.betti.total, oracle_stable=res.stable)
        if inst is not None:
            row["slack_oracle"] = inst - res.betti.total
    return row


def compare_rows(seeds: List[int], k: int, n: int, oracle: bool = True, jobs: int = 1) -> List[dict]:
    """Rows in seed order; ``jobs > 1`` spreads instances over processes."""
    if jobs <= 1:
        return [compare_row(s, k, n, oracle) for s in seeds]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(compare_row, seeds, [k] * len(seeds), [n] * len(seeds), [oracle] * len(seeds)))
