"""Choosing p and eps: the decreasing schedule and the retry protocol.

The analysis of ``det(omega q - eps p)`` is only meaningful for ``eps``
small and ``p`` generic.  Neither is effective, so both are chosen by a
stability heuristic: halve ``eps`` until the invariant signature of the
analysis repeats, and redraw ``p`` when that never happens.

The signature can only change when ``eps`` crosses a critical value of
one of the sorted generalized eigenvalues ``lambda_j(omega)`` of
``(omega q, p)`` on the sphere.  A floating-point estimate of the
smallest positive critical value gives the schedule its starting point,
so that plateaus at large ``eps`` are not mistaken for the small-``eps``
regime.  The estimate only steers the search; acceptance stays exact.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, List, Optional, Tuple

import numpy as np

from .errors import InputError, MeshTooCoarse, NotGeneric, NotTransversal
from .qform import QForm, QuadricSystem, fraction_str, inertia_descartes

log = logging.getLogger(__name__)

MAX_HALVINGS = 40
MAX_ATTEMPTS = 8
# consecutive structural failures (corank 2, label jumps) before redrawing p;
# the same patience applies to unresolved meshes, which only get worse as eps shrinks
STRUCTURAL_PATIENCE = 3


class Certificate(str, Enum):
    TRANSVERSAL_K2 = "TransversalK2"
    STABLE_K3 = "StableK3"
    GENERIC_EPS0 = "GenericEps0"
    FAILED = "Failed"


@dataclass(frozen=True)
class PerturbationCert:
    p: QForm
    epsilon: Fraction
    attempts: int
    certificate: Certificate
    reason: str = ""
    seed: Optional[int] = None
    trail: Tuple[Tuple[str, str], ...] = field(default=())  # (eps, signature or failure)

    def __post_init__(self):
        inertia = inertia_descartes(self.p)
        if inertia.pos != self.p.dim:
            raise AssertionError("p must be positive definite")
        if self.epsilon < 0 or (self.epsilon == 0 and self.certificate not in (Certificate.GENERIC_EPS0, Certificate.FAILED)):
            raise AssertionError("epsilon must be positive outside GenericEps0 mode")

    @property
    def ok(self) -> bool:
        return self.certificate != Certificate.FAILED

    def as_dict(self) -> dict:
        return {
            "certificate": self.certificate.value,
            "epsilon": fraction_str(self.epsilon),
            "attempts": self.attempts,
            "seed": self.seed,
            "p": [[fraction_str(a) for a in row] for row in self.p.matrix()],
            "reason": self.reason,
            "trail": [list(t) for t in self.trail],
        }


def default_p(n: int) -> QForm:
    if n < 0:
        raise InputError("n must be nonnegative")
    return QForm.identity(n + 1)


def default_magnitude(n: int) -> Fraction:
    return Fraction(1, 2 * (n + 1))


def randomize_p(seed: int, n: int, magnitude) -> QForm:
    """``I`` plus symmetric noise with entries in ``[-magnitude, magnitude]``.

    Noise entries are multiples of ``magnitude / 64``.  Positive
    definiteness is asserted; it is automatic for ``magnitude < 1/(n+1)``
    by diagonal dominance.
    """
    magnitude = Fraction(magnitude)
    if not 0 <= magnitude < 1:
        raise InputError("magnitude must lie in [0, 1)")
    rng = random.Random(seed)
    d = n + 1
    rows = [[Fraction(0)] * d for _ in range(d)]
    for i in range(d):
        for j in range(i + 1):
            a = magnitude * Fraction(rng.randint(-64, 64), 64)
            rows[i][j] = rows[j][i] = a + (1 if i == j else 0)
    p = QForm.from_matrix(rows)
    if inertia_descartes(p).pos != d:
        raise AssertionError(f"randomized p is not positive definite (seed={seed}, magnitude={magnitude})")
    return p


def epsilon_start(sys: QuadricSystem) -> Fraction:
    """Half the largest absolute entry: the schedule is invariant under rescaling the forms."""
    m = sys.max_abs_entry()
    return m / 2 if m else Fraction(1, 2)


CIRCLE_SAMPLES = 4096
CRITICAL_MESH_LEVEL = 5
# start the schedule this far below the smallest positive critical value
CRITICAL_MARGIN = 4


def _generalized_eigenvalues(sys: QuadricSystem, p: QForm, omegas: np.ndarray) -> np.ndarray:
    """Sorted eigenvalues of ``L^-1 (omega q) L^-T`` with ``p = L L^T``, one row per omega."""
    forms = np.array([[[float(a) for a in row] for row in q.matrix()] for q in sys.forms])
    linv = np.linalg.inv(np.linalg.cholesky(np.array([[float(a) for a in row] for row in p.matrix()])))
    pencil = np.einsum("mk,kij->mij", omegas, forms)
    return np.linalg.eigvalsh(linv @ pencil @ linv.T)


def _circle_critical_values(values: np.ndarray) -> List[float]:
    out = []
    for col in values.T:
        left, right = col - np.roll(col, 1), np.roll(col, -1) - col
        out.extend(col[left * right <= 0].tolist())
    return out


def _link_cycles(level: int) -> List[List[int]]:
    """Cyclically ordered link of every vertex of the sphere mesh."""
    from .net import sphere_mesh

    mesh = sphere_mesh(level)
    link: List[dict] = [dict() for _ in mesh.vertices]
    for tri in mesh.triangles:
        for a in range(3):
            v, x, y = tri[a], tri[(a + 1) % 3], tri[(a + 2) % 3]
            link[v].setdefault(x, []).append(y)
            link[v].setdefault(y, []).append(x)
    cycles = []
    for adj in link:
        start = next(iter(adj))
        cycle, prev, v = [start], start, adj[start][0]
        while v != start:
            cycle.append(v)
            a, b = adj[v]
            prev, v = v, (b if a == prev else a)
        cycles.append(cycle)
    return cycles


_LINKS: dict = {}


def _sphere_critical_values(values: np.ndarray, level: int) -> List[float]:
    if level not in _LINKS:
        _LINKS[level] = _link_cycles(level)
    out = []
    for v, cycle in enumerate(_LINKS[level]):
        diff = values[cycle] - values[v]
        changes = np.count_nonzero(np.sign(diff) != np.sign(np.roll(diff, 1, axis=0)), axis=0)
        out.extend(values[v, changes != 2].tolist())  # extrema have 0, saddles >= 4
    return out


def critical_epsilon(sys: QuadricSystem, p: QForm) -> Optional[float]:
    """Estimated smallest positive critical value of the sorted eigenvalues, or None.

    Sampled on a fine circle (k = 2) or on the sphere mesh (k = 3).
    Values within rounding of zero are ignored.
    """
    if sys.k == 2:
        theta = np.linspace(0.0, 2 * np.pi, CIRCLE_SAMPLES, endpoint=False)
        omegas = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        crit = _circle_critical_values(_generalized_eigenvalues(sys, p, omegas))
    elif sys.k == 3:
        from .net import sphere_mesh

        verts = np.array(sphere_mesh(CRITICAL_MESH_LEVEL).vertices, dtype=float)
        omegas = verts / np.linalg.norm(verts, axis=1, keepdims=True)
        crit = _sphere_critical_values(_generalized_eigenvalues(sys, p, omegas), CRITICAL_MESH_LEVEL)
    else:
        return None
    floor = 1e-12 * max(1.0, float(sys.max_abs_entry()))
    positive = [c for c in crit if c > floor]
    return min(positive) if positive else None


def guided_start(sys: QuadricSystem, p: QForm) -> Fraction:
    """``epsilon_start`` halved until it sits below the critical-value estimate."""
    eps = epsilon_start(sys)
    crit = critical_epsilon(sys, p)
    if crit is not None:
        target = crit / CRITICAL_MARGIN
        for _ in range(MAX_HALVINGS):
            if eps <= target:
                break
            eps /= 2
    return eps


Analyzer = Callable[[QuadricSystem, Fraction, QForm], Any]


@dataclass
class ScheduleResult:
    epsilon: Optional[Fraction]
    analysis: Any
    trail: List[Tuple[str, str]]
    reason: str = ""


def epsilon_schedule(
    sys: QuadricSystem,
    p: QForm,
    analyzer: Analyzer,
    start: Optional[Fraction] = None,
    confirm: bool = False,
) -> ScheduleResult:
    """Halve ``eps`` until two consecutive analyses share a signature.

    Starts at ``start`` or, by default, at :func:`guided_start`.  The
    accepted ``eps`` is the larger of the two.  With ``confirm`` the
    signature must also hold at ``eps / 4``; otherwise the schedule goes on.
    Non-transversal values of ``eps`` are skipped; a run of structural
    failures (see :class:`NotGeneric`) or of unresolved meshes aborts early
    so that p can be redrawn.
    """
    eps = Fraction(start) if start is not None else guided_start(sys, p)
    trail: List[Tuple[str, str]] = []
    prev = None  # (eps, analysis)
    pending = None  # accepted pair awaiting confirmation
    structural = coarse = 0
    last_reason = ""
    for _ in range(MAX_HALVINGS + 1):
        try:
            a = analyzer(sys, eps, p)
        except NotTransversal as exc:
            trail.append((fraction_str(eps), f"fail:{exc.reason}"))
            last_reason = exc.reason
            prev = pending = None
            structural = structural + 1 if isinstance(exc, NotGeneric) else 0
            coarse = coarse + 1 if isinstance(exc, MeshTooCoarse) else 0
            if structural >= STRUCTURAL_PATIENCE or coarse >= STRUCTURAL_PATIENCE:
                return ScheduleResult(None, None, trail, exc.reason)
            eps /= 2
            continue
        structural = coarse = 0
        trail.append((fraction_str(eps), repr(a.signature)))
        if pending is not None:
            if a.signature == pending[1].signature:
                return ScheduleResult(pending[0], pending[1], trail)
            pending = None
        if prev is not None and prev[1].signature == a.signature:
            if not confirm:
                return ScheduleResult(prev[0], prev[1], trail)
            pending = prev
        prev = (eps, a)
        eps /= 2
    return ScheduleResult(None, None, trail, last_reason or "no_stabilization")


def genericity_check(sys: QuadricSystem, p: QForm, eps, analyzer: Analyzer) -> Tuple[bool, str]:
    """Run the analyzer once; pass, or fail with the machine-readable reason."""
    try:
        analyzer(sys, Fraction(eps), p)
    except NotTransversal as exc:
        return False, exc.reason
    return True, ""


def certify(
    sys: QuadricSystem,
    analyzer: Analyzer,
    success: Certificate,
    seed: Optional[int] = None,
    magnitude: Optional[Fraction] = None,
    epsilon: Optional[Fraction] = None,
    eps0: bool = False,
    confirm: bool = False,
    p0: Optional[QForm] = None,
) -> Tuple[PerturbationCert, Any]:
    """Schedule with p = I (or ``p0``) first, then with up to 7 seeded random p.

    With ``seed`` given, every attempt uses a seeded random p.  ``epsilon``
    fixes eps instead of scheduling; ``eps0`` analyzes the unperturbed
    family (eps = 0).  Returns the certificate and the accepted analysis
    (None when Failed).
    """
    magnitude = default_magnitude(sys.n) if magnitude is None else Fraction(magnitude)
    base_seed = 0 if seed is None else seed
    trail: List[Tuple[str, str]] = []
    reason = ""
    p = default_p(sys.n) if p0 is None else p0
    if inertia_descartes(p).pos != p.dim:
        raise InputError("p must be positive definite")
    attempt = 0
    for attempt in range(1, MAX_ATTEMPTS + 1):
        if attempt > 1 or (seed is not None and p0 is None):
            p = randomize_p(base_seed + attempt - 1, sys.n, magnitude)
        if eps0 or epsilon is not None:
            eps = Fraction(0) if eps0 else Fraction(epsilon)
            try:
                analysis = analyzer(sys, eps, p)
            except NotTransversal as exc:
                reason = exc.reason
                trail.append((fraction_str(eps), f"fail:{exc.reason}"))
                if eps0:
                    # p plays no role at eps = 0; nothing to retry
                    break
                continue
            trail.append((fraction_str(eps), repr(analysis.signature)))
            kind = Certificate.GENERIC_EPS0 if eps0 else success
            return PerturbationCert(p, eps, attempt, kind, "", seed, tuple(trail)), analysis
        result = epsilon_schedule(sys, p, analyzer, confirm=confirm)
        trail.extend(result.trail)
        if result.epsilon is not None:
            return PerturbationCert(p, result.epsilon, attempt, success, "", seed, tuple(trail)), result.analysis
        reason = result.reason
        log.info("attempt %d failed (%s); redrawing p", attempt, reason)
    return PerturbationCert(p, Fraction(0), attempt, Certificate.FAILED, reason, seed, tuple(trail)), None
