"""Curated triangulations and the sublevel-set model of a quadric intersection.

Projective space is triangulated as the antipodal quotient of the
boundary of the cube ``[-N, N]^(n+1)`` with every unit cube split into
Kuhn simplices.  The Kuhn triangulation is invariant under ``x -> -x``,
so for N >= 2 the quotient is again a simplicial complex.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InputError
from .homology import BettiVector, SimplicialComplex, betti_z2
from .qform import QuadricSystem

Point = Tuple[int, ...]

# 6-vertex real projective plane (hemi-icosahedron)
_RP2_6 = (
    (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
    (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3),
)

# 11-vertex real projective 3-space, obtained by link-condition edge
# contractions of the N=1 cube quotient below (see tools/shrink_rp3.py)
_RP3_11: Tuple[Tuple[int, ...], ...] = (
    (0, 1, 3, 5), (0, 1, 3, 7), (0, 1, 4, 7), (0, 1, 4, 9), (0, 1, 5, 9),
    (0, 2, 3, 7), (0, 2, 3, 8), (0, 2, 6, 7), (0, 2, 6, 10), (0, 2, 8, 10),
    (0, 3, 5, 8), (0, 4, 6, 7), (0, 4, 6, 10), (0, 4, 9, 10), (0, 5, 8, 9),
    (0, 8, 9, 10), (1, 2, 4, 8), (1, 2, 4, 9), (1, 2, 5, 6), (1, 2, 5, 10),
    (1, 2, 6, 9), (1, 2, 8, 10), (1, 3, 5, 7), (1, 4, 7, 8), (1, 5, 6, 9),
    (1, 5, 7, 10), (1, 7, 8, 10), (2, 3, 4, 8), (2, 3, 4, 9), (2, 3, 7, 9),
    (2, 5, 6, 10), (2, 6, 7, 9), (3, 4, 6, 8), (3, 4, 6, 10), (3, 4, 9, 10),
    (3, 5, 6, 8), (3, 5, 6, 10), (3, 5, 7, 10), (3, 7, 9, 10), (4, 6, 7, 8),
    (5, 6, 8, 9), (6, 7, 8, 9), (7, 8, 9, 10),
)


def _torus7():
    out = []
    for i in range(7):
        out.append((i, (i + 1) % 7, (i + 3) % 7))
        out.append((i, (i + 2) % 7, (i + 3) % 7))
    return tuple(tuple(sorted(t)) for t in out)


def _octahedron():
    # vertices 0..5 = +x, -x, +y, -y, +z, -z
    return tuple((a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5))


CURATED = {
    "circle": (3, ((0, 1), (1, 2), (0, 2))),
    "disk": (7, tuple((0, i, i % 6 + 1) for i in range(1, 7))),
    "sphere2": (6, _octahedron()),
    "torus7": (7, _torus7()),
    "rp2_6": (6, _RP2_6),
    "rp3_11": (11, _RP3_11),
}


def curated_complexes(name: str) -> SimplicialComplex:
    try:
        count, simplices = CURATED[name]
    except KeyError:
        raise InputError(f"unknown complex {name!r}; choose from {sorted(CURATED)}") from None
    return SimplicialComplex(count, simplices)


# -- projective space from the cube boundary ----------------------------------


def canonical(x: Point) -> Point:
    """Representative of ``{x, -x}`` whose first nonzero coordinate is positive."""
    for a in x:
        if a:
            return x if a > 0 else tuple(-b for b in x)
    raise InputError("zero vector has no projective class")


def _facet_simplices(n: int, N: int, facet: Tuple[int, int], base: Sequence[int]):
    """Kuhn simplices of the unit n-cube with lower corner ``base`` on a facet."""
    axis, side = facet
    free = [i for i in range(n + 1) if i != axis]
    corner = [0] * (n + 1)
    corner[axis] = side * N
    for i, b in zip(free, base):
        corner[i] = b
    for perm in permutations(free):
        v = list(corner)
        simplex = [tuple(v)]
        for i in perm:
            v[i] += 1
            simplex.append(tuple(v))
        yield simplex


def _facets(n: int):
    return [(axis, side) for axis in range(n + 1) for side in (-1, 1)]


def sphere_cube_points(n: int, N: int) -> List[Point]:
    pts = set()
    for axis, side in _facets(n):
        for base in product(range(-N, N + 1), repeat=n):
            v = list(base)
            v.insert(axis, side * N)
            pts.add(tuple(v))
    return sorted(pts)


def projective_space(n: int, N: int = 2) -> SimplicialComplex:
    """Triangulation of RP^n (full, no filtering); mostly for tests."""
    faces = set()
    for facet in _facets(n):
        for base in product(range(-N, N), repeat=n):
            for s in _facet_simplices(n, N, facet, base):
                faces.add(tuple(sorted(canonical(v) for v in s)))
    return SimplicialComplex.from_simplices(sorted(faces))


# -- sublevel model ------------------------------------------------------------


def _integer_forms(sys: QuadricSystem) -> List[List[List[int]]]:
    """Each form as an integer matrix (a positive multiple of the original)."""
    out = []
    for q in sys.forms:
        m = q.matrix()
        den = lcm(*(a.denominator for row in m for a in row))
        out.append([[int(a * den) for a in row] for row in m])
    return out


def _bareiss_det(m: List[List[int]]) -> int:
    """Fraction-free integer determinant."""
    a = [list(row) for row in m]
    size = len(a)
    sign, prev = 1, 1
    for col in range(size - 1):
        if a[col][col] == 0:
            piv = next((r for r in range(col + 1, size) if a[r][col]), None)
            if piv is None:
                return 0
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        for r in range(col + 1, size):
            for c in range(col + 1, size):
                a[r][c] = (a[r][c] * a[col][col] - a[r][col] * a[col][c]) // prev
        prev = a[col][col]
    return sign * a[-1][-1]


def _distance_parts(ints, x: Point) -> Tuple[int, int]:
    """``(num, den)`` with ``F(x/|x|) = num / den``; den is 0 when J J^T is singular.

    Uses ``v^T adj(M) v = -det [[M, v], [v^T, 0]]``.
    """
    d = len(x)
    r2 = sum(a * a for a in x)
    av = [[sum(row[j] * x[j] for j in range(d)) for row in qi] for qi in ints]
    v = [sum(a * b for a, b in zip(x, ai)) for ai in av]
    if not any(v):
        return 0, 1
    m = [[r2 * sum(p * q for p, q in zip(ai, aj)) - vi * vj for aj, vj in zip(av, v)] for ai, vi in zip(av, v)]
    den = _bareiss_det(m)
    if den == 0:
        return 1, 0
    bordered = [row + [vi] for row, vi in zip(m, v)] + [v + [0]]
    return -_bareiss_det(bordered), 4 * den


def sublevel_values(sys: QuadricSystem, points: Sequence[Point]) -> Dict[Point, Optional[Fraction]]:
    """Squared first-order distance from ``u = x/|x|`` to X on the sphere.

    This is ``F = q(u)^T (J J^T)^-1 q(u)``, where J holds the tangential
    gradients: the Gauss-Newton step length to ``{q = 0}``.  F is invariant
    under rescaling each form, so the threshold is a squared angular
    radius.  For integer ``x``, ``a_i = Q_i x`` and ``v_i = x.a_i``, this
    equals ``v^T M^-1 v / 4`` with ``M_ij = |x|^2 a_i.a_j - v_i v_j``.
    None marks points where J J^T is singular and q does not vanish.
    """
    ints = _integer_forms(sys)
    out: Dict[Point, Optional[Fraction]] = {}
    for x in points:
        num, den = _distance_parts(ints, x)
        out[x] = Fraction(num, den) if den else None
    return out


def default_tau(resolution: int) -> Fraction:
    """Squared radius of the kept tube: two grid steps at the facet centres."""
    return Fraction(4, resolution * resolution)


@lru_cache(maxsize=8)
def _point_cloud(n: int, N: int) -> Tuple[Tuple[Point, ...], np.ndarray]:
    """Canonical grid points of RP^n and their unit float vectors (shared by all instances)."""
    points = tuple(sorted({canonical(v) for v in sphere_cube_points(n, N)}))
    x = np.array(points, dtype=float)
    x /= np.linalg.norm(x, axis=1)[:, None]
    x.setflags(write=False)
    return points, x


def _candidates(ints, n: int, N: int, tau: Fraction) -> List[Point]:
    """Points whose float64 F is at most ``2 tau`` (or not finite).

    Only a prefilter: every kept point is confirmed in exact arithmetic,
    and the factor 2 dwarfs the rounding error of the float evaluation.
    """
    points, x = _point_cloud(n, N)
    qs = [np.array(q, dtype=float) for q in ints]
    ax = np.stack([x @ q for q in qs], axis=1)  # (m, k, d)
    v = np.einsum("mkd,md->mk", ax, x)
    g = ax - v[:, :, None] * x[:, None, :]
    m = np.einsum("mkd,mld->mkl", g, g)
    k = len(ints)
    singular = np.abs(np.linalg.det(m)) <= 1e-12 * np.maximum(1.0, np.abs(m).max(axis=(1, 2))) ** k
    m[singular] = np.eye(k)
    with np.errstate(all="ignore"):
        sol = np.linalg.solve(m, v[:, :, None])[..., 0]
        f = np.einsum("mk,mk->m", v, sol) / 4
    bad = singular | ~np.isfinite(f)
    mask = bad | (f <= 2 * float(tau)) | (np.abs(v).max(axis=1) == 0)
    return [p for p, keep in zip(points, mask) if keep]


def approximate_variety(sys: QuadricSystem, resolution: int, tau: Fraction | None = None) -> SimplicialComplex:
    """Vertex-induced subcomplex of RP^n on ``{F <= tau}``."""
    n = sys.n
    if n > 3:
        raise InputError("the sublevel oracle supports n <= 3 only")
    if n < 1:
        raise InputError("the sublevel oracle needs n >= 1")
    if resolution < 2:
        raise InputError("resolution must be at least 2")
    tau = default_tau(resolution) if tau is None else Fraction(tau)
    if tau < 0:
        raise InputError("tau must be nonnegative")
    N = resolution
    ints = _integer_forms(sys)
    keep = set()
    for x in _candidates(ints, n, N, tau):
        num, den = _distance_parts(ints, x)
        if den and num * tau.denominator <= tau.numerator * den:
            keep.add(x)
    # raw vertex (either sign) -> its canonical representative, kept points only
    canon = {}
    for x in keep:
        canon[x] = x
        canon[tuple(-a for a in x)] = x
    cubes = set()
    for y in canon:
        for axis, side in _facets(n):
            if y[axis] != side * N:
                continue
            free = [y[i] for i in range(n + 1) if i != axis]
            for bits in product((0, 1), repeat=n):
                base = tuple(a - b for a, b in zip(free, bits))
                if all(-N <= a < N for a in base):
                    cubes.add(((axis, side), base))
    faces = set()
    for facet, base in cubes:
        for s in _facet_simplices(n, N, facet, base):
            kept = tuple(sorted({canon[v] for v in s if v in canon}))
            if kept:
                faces.add(kept)
    return SimplicialComplex.from_simplices(sorted(faces))


@dataclass(frozen=True)
class OracleResult:
    betti: BettiVector
    stable: bool
    resolutions: Tuple[int, ...]
    tau: Optional[str]
    history: Tuple[Tuple[int, ...], ...]
    empty_confirmed: Optional[bool] = None  # empty at 4 tau too (only set when empty)

    def as_dict(self) -> dict:
        out = {
            "betti": list(self.betti.betti),
            "total": self.betti.total,
            "stable": self.stable,
            "empty": self.betti.total == 0,
            "resolutions": list(self.resolutions),
            "tau": self.tau,
            "history": [list(h) for h in self.history],
        }
        if self.empty_confirmed is not None:
            out["empty_confirmed"] = self.empty_confirmed
        return out


def resolution_ladder(start: int, max_resolution: int) -> List[int]:
    out = [start]
    while out[-1] < max_resolution:
        out.append(min(max_resolution, out[-1] + max(1, out[-1] // 2)))
    return out


# (start, top) of the resolution ladder, keyed by (n, expected dim of X)
_LADDERS = {1: (16, 64), 2: (16, 64), 3: (10, 20)}
_SURFACE_LADDER = (4, 8)  # hypersurfaces in RP^3 keep most of the mesh
# consecutive agreeing rungs required; coarse rungs can agree on a near miss
_AGREE = {1: 3, 2: 3, 3: 2}


def default_ladder(sys: QuadricSystem) -> Tuple[int, int]:
    if sys.n == 3 and sys.k == 1:
        return _SURFACE_LADDER
    return _LADDERS[sys.n]


def oracle_betti(
    sys: QuadricSystem,
    resolution: int | None = None,
    tau: Fraction | None = None,
    max_resolution: int | None = None,
) -> OracleResult:
    """Run the sublevel model on a resolution ladder until consecutive rungs agree.

    Three rungs must agree for n <= 2 and two for n = 3 (where rungs are costly).

    An empty answer is re-checked at ``4 tau`` on the last rung.
    """
    if not 1 <= sys.n <= 3:
        raise InputError("the sublevel oracle supports 1 <= n <= 3 only")
    lo, hi = default_ladder(sys)
    start = resolution or lo
    top = max(max_resolution or hi, start)
    history: List[Tuple[int, ...]] = []
    ladder = resolution_ladder(start, top)
    tau_str = None if tau is None else str(Fraction(tau))
    agree = _AGREE[sys.n]
    run = 0
    prev = None
    result = None
    for i, res in enumerate(ladder):
        b = betti_z2(approximate_variety(sys, res, tau))
        history.append(b.betti)
        run = run + 1 if prev is not None and _trim(prev.betti) == _trim(b.betti) else 1
        if run >= agree:
            result = (b, True, tuple(ladder[i - agree + 1 : i + 1]))
            break
        prev = b
    if result is None:
        result = (prev, False, tuple(ladder[-agree:]))
    b, stable, rungs = result
    b = BettiVector(_trim(b.betti))
    confirmed = None
    if b.total == 0:
        res = rungs[-1]
        wide = (default_tau(res) if tau is None else Fraction(tau)) * 4
        confirmed = betti_z2(approximate_variety(sys, res, wide)).total == 0
    return OracleResult(b, stable, rungs, tau_str, tuple(history), confirmed)


def _trim(betti: Tuple[int, ...]) -> Tuple[int, ...]:
    b = list(betti)
    while b and b[-1] == 0:
        b.pop()
    return tuple(b)
