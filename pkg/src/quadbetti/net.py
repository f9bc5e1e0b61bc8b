"""Nets of quadrics (k = 3): the curve ``det(omega q - eps p) = 0`` on S^2.

The sphere is meshed by the regular subdivision of the octahedron
``|x| + |y| + |z| = 2^level``; all vertices are integer vectors and are
never normalized.  For a vertex ``v`` with ``s = |v|`` the matrix
``v q - eps s p`` is a positive multiple of ``omega q - eps p`` at
``omega = v / s``, so signs and inertia can be read off it.  Its
characteristic polynomial coefficients are polynomials in
``(v1, v2, v3, s)``; after reducing with ``s^2 = |v|^2`` each is
``A + s B`` with integer ``A, B``, and the sign of ``A + s B`` is decided
by comparing ``A^2`` with ``|v|^2 B^2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import lcm, sqrt
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .bounds import BoundReport, topological_bound_from_data
from .errors import InputError, MeshTooCoarse, NotGeneric, VertexOnCurve
from .poly import MPoly, berkowitz
from .qform import QForm, QuadricSystem, fraction_str, inertia_from_coeffs

Vec = Tuple[int, int, int]

START_LEVEL = 3
MAX_LEVEL = 7
CORANK2_DEPTH = 3

# small integer offsets tried when a vertex sits exactly on the curve
_JITTER = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, 1), (1, 0, 1), (1, -1, 0), (0, 1, -1))


# -- mesh --------------------------------------------------------------------


@dataclass(frozen=True)
class SphereMesh:
    level: int
    vertices: Tuple[Vec, ...]
    triangles: Tuple[Tuple[int, int, int], ...]
    adjacency: Dict[Tuple[int, int], Tuple[int, ...]]  # sorted edge -> triangle indices

    @property
    def edges(self) -> List[Tuple[int, int]]:
        return sorted(self.adjacency)


@lru_cache(maxsize=8)
def sphere_mesh(level: int) -> SphereMesh:
    """Octahedron subdivided ``level`` times; a closed triangulated 2-sphere."""
    if level < 0:
        raise InputError("mesh level must be nonnegative")
    m = 2 ** level
    index: Dict[Vec, int] = {}
    vertices: List[Vec] = []

    def vid(v: Vec) -> int:
        if v not in index:
            index[v] = len(vertices)
            vertices.append(v)
        return index[v]

    tris = []
    for sx, sy, sz in product((1, -1), repeat=3):
        def at(a, b):
            return vid((sx * a, sy * b, sz * (m - a - b)))

        for a in range(m):
            for b in range(m - a):
                tris.append((at(a, b), at(a + 1, b), at(a, b + 1)))
                if a + b <= m - 2:
                    tris.append((at(a + 1, b), at(a + 1, b + 1), at(a, b + 1)))
    adjacency: Dict[Tuple[int, int], List[int]] = {}
    for t, (i, j, k) in enumerate(tris):
        for e in ((i, j), (j, k), (i, k)):
            adjacency.setdefault(tuple(sorted(e)), []).append(t)
    assert all(len(ts) == 2 for ts in adjacency.values()), "mesh is not a closed surface"
    assert len(vertices) - len(adjacency) + len(tris) == 2
    return SphereMesh(level, tuple(vertices), tuple(tris), {e: tuple(ts) for e, ts in adjacency.items()})


# -- exact signs ---------------------------------------------------------------


Term = Tuple[int, int, int, int, int]  # coefficient, e1, e2, e3, e_s


class NetFamily:
    """Precomputed characteristic polynomial of ``v q - eps s p`` (integer scaled)."""

    def __init__(self, sys: QuadricSystem, eps, p: QForm):
        if sys.k != 3:
            raise InputError(f"net analysis needs k = 3, got k = {sys.k}")
        if p.dim != sys.dim:
            raise InputError("p has the wrong dimension")
        self.sys, self.eps, self.p = sys, Fraction(eps), p
        if self.eps < 0:
            raise InputError("epsilon must be nonnegative")
        d = sys.dim
        scale = lcm(*(a.denominator for q in sys.forms for a in q.entries),
                    *((self.eps * a).denominator for a in p.entries))
        v = [MPoly.var(4, i) for i in range(4)]
        zero = MPoly(4)
        matrix = []
        for i in range(d):
            row = []
            for j in range(d):
                entry = zero
                for w, q in zip(v[:3], sys.forms):
                    if q[i, j]:
                        entry = entry + w * (q[i, j] * scale)
                if p[i, j] and self.eps:
                    entry = entry - v[3] * (self.eps * p[i, j] * scale)
                row.append(entry)
            matrix.append(row)
        coeffs = berkowitz(matrix, MPoly.const(4, 1), zero)  # det(tI - M), ascending in t
        self.dim = d
        self.terms: List[List[Term]] = []
        for c in coeffs:
            terms = []
            for mono, a in c.terms.items():
                assert a.denominator == 1
                terms.append((int(a), *mono))
            self.terms.append(terms)
        self.det_sign_flip = -1 if d % 2 else 1  # det(M) = (-1)^d * c_0

    def split(self, vec: Sequence[int], which: int) -> Tuple[int, int]:
        """Coefficient ``which`` at ``v`` as ``(A, B)`` with value ``A + |v| B``."""
        r2 = vec[0] * vec[0] + vec[1] * vec[1] + vec[2] * vec[2]
        a = b = 0
        for c, e1, e2, e3, es in self.terms[which]:
            term = c * vec[0] ** e1 * vec[1] ** e2 * vec[2] ** e3 * r2 ** (es // 2)
            if es % 2:
                b += term
            else:
                a += term
        return a, b

    def coefficient_signs(self, vec: Sequence[int]) -> List[int]:
        r2 = vec[0] * vec[0] + vec[1] * vec[1] + vec[2] * vec[2]
        return [_sign_a_plus_sb(*self.split(vec, i), r2) for i in range(len(self.terms))]

    def _float_terms(self):
        if not hasattr(self, "_ft"):
            self._ft = []
            for terms in self.terms:
                coef = np.array([float(t[0]) for t in terms]) if terms else np.zeros(0)
                expo = np.array([t[1:] for t in terms], dtype=float).reshape(len(terms), 4)
                self._ft.append((coef, expo, int(expo.sum(axis=1).max()) if terms else 0))
        return self._ft

    def coefficient_signs_many(self, vecs: Sequence[Sequence[int]]) -> List[List[int]]:
        """``coefficient_signs`` for many vertices: float filter, exact where undecided.

        Each monomial carries a relative rounding error below ``(deg + 3) u``
        (integer coordinates are exact, ``|v|`` is correctly rounded) and the
        sum adds at most ``T u`` relative to the sum of absolute values, so a
        float value larger than ``(deg + T + 8) * 8u`` times that sum has the
        right sign.  Everything else goes through the exact ``A + |v| B`` test.
        """
        x = np.array(vecs, dtype=float)
        x = np.column_stack([x, np.sqrt((x * x).sum(axis=1))])
        out = np.zeros((len(vecs), len(self.terms)), dtype=int)
        undecided = np.zeros((len(vecs), len(self.terms)), dtype=bool)
        with np.errstate(all="ignore"):
            for i, (coef, expo, deg) in enumerate(self._float_terms()):
                if not len(coef):
                    continue
                mono = np.prod(x[:, None, :] ** expo[None, :, :], axis=2)
                val = mono @ coef
                mag = np.abs(mono) @ np.abs(coef)
                bound = mag * ((deg + len(coef) + 8) * 8 * 2.0 ** -53)
                sure = np.isfinite(val) & np.isfinite(bound) & (np.abs(val) > bound)
                out[:, i] = np.where(sure, np.sign(val), 0).astype(int)
                undecided[:, i] = ~sure
        result = out.tolist()
        for row in np.nonzero(undecided.any(axis=1))[0]:
            vec = [int(a) for a in vecs[row]]
            r2 = vec[0] * vec[0] + vec[1] * vec[1] + vec[2] * vec[2]
            for i in np.nonzero(undecided[row])[0]:
                result[row][i] = _sign_a_plus_sb(*self.split(vec, int(i)), r2)
        return result


def _sign_a_plus_sb(a: int, b: int, r2: int) -> int:
    """Sign of ``a + sqrt(r2) b`` for ``r2 > 0``."""
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0 or sa == sb:
        return sa or sb
    if sa == 0:
        return sb
    lhs, rhs = a * a, r2 * b * b
    if lhs == rhs:
        return 0
    return sa if lhs > rhs else sb


def exact_sign(sys: QuadricSystem, eps, p: QForm, v: Sequence) -> int:
    """Sign of ``det((v/|v|) q - eps p)``; raises VertexOnCurve on an exact zero."""
    v = [Fraction(a) for a in v]
    if len(v) != 3 or not any(v):
        raise InputError("v must be a nonzero vector of length 3")
    den = lcm(*(a.denominator for a in v))
    vec = [int(a * den) for a in v]
    fam = _family(sys, eps, p)
    r2 = sum(a * a for a in vec)
    s = _sign_a_plus_sb(*fam.split(vec, 0), r2) * fam.det_sign_flip
    if s == 0:
        raise VertexOnCurve(f"det vanishes at v={[fraction_str(a) for a in v]}")
    return s


_FAMILY_CACHE: Dict[Tuple, NetFamily] = {}


def _family(sys: QuadricSystem, eps, p: QForm) -> NetFamily:
    key = (sys, Fraction(eps), p)
    fam = _FAMILY_CACHE.get(key)
    if fam is None:
        if len(_FAMILY_CACHE) > 32:
            _FAMILY_CACHE.clear()
        fam = _FAMILY_CACHE[key] = NetFamily(sys, eps, p)
    return fam


# -- sign field, curve, regions -------------------------------------------------


class _UnionFind:
    def __init__(self):
        self.parent: Dict = {}

    def find(self, a):
        self.parent.setdefault(a, a)
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def classes(self, items) -> Dict:
        out: Dict = {}
        for x in items:
            out.setdefault(self.find(x), []).append(x)
        return out


@dataclass
class SignField:
    mesh: SphereMesh
    positions: List[Vec]  # jittered where a lattice vertex hits the curve
    coeff_signs: List[List[int]]  # per vertex, signs of c_0..c_d of det(tI - M)
    det_flip: int

    def sign(self, i: int) -> int:
        return self.coeff_signs[i][0] * self.det_flip

    def label(self, i: int) -> int:
        return inertia_from_coeffs(self.coeff_signs[i]).neg


def sign_field(fam: NetFamily, mesh: SphereMesh) -> SignField:
    positions, signs = [], []
    for v, cs in zip(mesh.vertices, fam.coefficient_signs_many(mesh.vertices)):
        pos = v
        if cs[0] == 0:
            for delta in _JITTER:
                pos = tuple(4 * a + b for a, b in zip(v, delta))
                cs = fam.coefficient_signs(pos)
                if cs[0] != 0:
                    break
            else:
                raise VertexOnCurve(f"could not move vertex {v} off the curve")
        positions.append(pos)
        signs.append(cs)
    return SignField(mesh, positions, signs, fam.det_sign_flip)


@dataclass(frozen=True)
class CurveTrace:
    crossing_edges: Tuple[Tuple[int, int], ...]
    loops: Tuple[Tuple[Tuple[int, int], ...], ...]  # crossing edges of each component

    @property
    def components(self) -> int:
        return len(self.loops)

    @property
    def betti_sigma(self) -> int:
        return 2 * self.components


def trace_curve(field_: SignField) -> CurveTrace:
    """Pair crossings inside each triangle and collect the closed loops."""
    mesh = field_.mesh
    sign = [field_.sign(i) for i in range(len(mesh.vertices))]
    crossing = {e for e in mesh.adjacency if sign[e[0]] != sign[e[1]]}
    uf = _UnionFind()
    for i, j, k in mesh.triangles:
        cut = [e for e in (tuple(sorted((i, j))), tuple(sorted((j, k))), tuple(sorted((i, k)))) if e in crossing]
        if len(cut) not in (0, 2):
            raise MeshTooCoarse("odd_crossings", f"triangle {(i, j, k)} has {len(cut)} crossings")
        if cut:
            uf.union(cut[0], cut[1])
    loops = sorted(tuple(sorted(es)) for es in uf.classes(sorted(crossing)).values())
    return CurveTrace(tuple(sorted(crossing)), tuple(loops))


@dataclass(frozen=True)
class HalfBoundaryCheck:
    j: int
    betti: int  # total Betti number of the union of regions with label <= j
    boundary_loops: int

    @property
    def holds(self) -> bool:
        # b(M) = b(dM)/2 and each boundary loop contributes 2 to b(dM)
        return self.betti == self.boundary_loops


@dataclass(frozen=True)
class NetAnalysis:
    n: int
    epsilon: Fraction
    level: int
    curve_components: int
    betti_sigma: int
    regions: Tuple[Tuple[int, int], ...]  # (region id, label)
    loop_labels: Tuple[Tuple[int, int], ...]  # label pair across each loop
    mu: int
    nu: int
    corank2_flags: Tuple[Tuple[float, float, float], ...]
    bound: BoundReport
    stabilized: bool
    level_history: Tuple[Tuple, ...] = ()
    half_boundary: Tuple[HalfBoundaryCheck, ...] = ()
    plot_segments: Tuple[Tuple[Tuple[float, float, float], Tuple[float, float, float]], ...] = field(default=(), compare=False, repr=False)
    plot_samples: Tuple[Tuple[Tuple[float, float, float], int], ...] = field(default=(), compare=False, repr=False)

    @property
    def signature(self) -> Tuple:
        return (self.curve_components, tuple(sorted(lbl for _, lbl in self.regions)), tuple(sorted(self.loop_labels)))

    def as_dict(self) -> dict:
        return {
            "k": 3,
            "epsilon": fraction_str(self.epsilon),
            "level": self.level,
            "curve_components": self.curve_components,
            "betti_sigma": self.betti_sigma,
            "regions": [{"id": r, "label": lbl} for r, lbl in self.regions],
            "loop_labels": [list(x) for x in self.loop_labels],
            "mu": self.mu,
            "nu": self.nu,
            "corank2_flags": [list(f) for f in self.corank2_flags],
            "bound": self.bound.as_dict(),
            "stabilized": self.stabilized,
            "level_history": [list(h) for h in self.level_history],
            "half_boundary": [
                {"j": h.j, "betti": h.betti, "boundary_loops": h.boundary_loops, "holds": h.holds}
                for h in self.half_boundary
            ],
        }

    def plot_rows(self) -> List[dict]:
        """Curve segments and labelled sample points, for CSV export."""
        rows = []
        for a, b in self.plot_segments:
            rows.append({"kind": "segment", "x0": a[0], "y0": a[1], "z0": a[2], "x1": b[0], "y1": b[1], "z1": b[2], "label": ""})
        for pt, lbl in self.plot_samples:
            rows.append({"kind": "sample", "x0": pt[0], "y0": pt[1], "z0": pt[2], "x1": "", "y1": "", "z1": "", "label": lbl})
        return rows


def _unit(v: Sequence[int]) -> Tuple[float, float, float]:
    r = sqrt(sum(a * a for a in v))
    return tuple(a / r for a in v)


@dataclass
class _Level:
    field: SignField
    trace: CurveTrace
    region_of: Dict[int, int]
    region_labels: Dict[int, int]
    loop_labels: List[Tuple[int, int]]

    @property
    def signature(self):
        return (
            self.trace.components,
            tuple(sorted(self.region_labels.values())),
            tuple(sorted(self.loop_labels)),
        )


def region_labels(field_: SignField, trace: CurveTrace) -> _Level:
    """Flood-fill vertices across uncut edges; one exact label per region, checked at every vertex."""
    mesh = field_.mesh
    crossing = set(trace.crossing_edges)
    uf = _UnionFind()
    for i in range(len(mesh.vertices)):
        uf.find(i)
    for e in mesh.adjacency:
        if e not in crossing:
            uf.union(*e)
    classes = uf.classes(range(len(mesh.vertices)))
    roots = sorted(classes, key=lambda r: min(classes[r]))
    region_of = {}
    labels: Dict[int, int] = {}
    for rid, root in enumerate(roots):
        members = classes[root]
        first = field_.label(members[0])
        for i in members:
            region_of[i] = rid
            if field_.label(i) != first:
                raise MeshTooCoarse("label_inconsistent", f"region {rid} carries labels {first} and {field_.label(i)}")
        labels[rid] = first
    if len(roots) != trace.components + 1:
        raise MeshTooCoarse("region_count", f"{len(roots)} regions for {trace.components} loops")
    loop_labels = []
    for loop in trace.loops:
        pairs = set()
        for i, j in loop:
            a, b = labels[region_of[i]], labels[region_of[j]]
            if abs(a - b) != 1:
                raise NotGeneric("label_jump", f"labels {a} and {b} meet across the curve")
            pairs.add((min(a, b), max(a, b)))
        if len(pairs) != 1:
            raise MeshTooCoarse("loop_labels", f"one loop separates several label pairs {sorted(pairs)}")
        loop_labels.append(pairs.pop())
    return _Level(field_, trace, region_of, labels, loop_labels)


def induced_betti(mesh: SphereMesh, keep) -> int:
    """Total Z/2 Betti number of the subcomplex of the sphere mesh induced on ``keep``.

    ``b0`` by union-find, ``b2 = 1`` only for the whole sphere (a proper
    subcomplex of S^2 has no 2-cycles), and ``b1 = b0 + b2 - chi``.
    """
    if not keep:
        return 0
    edges = [e for e in mesh.adjacency if e[0] in keep and e[1] in keep]
    faces = sum(1 for tri in mesh.triangles if all(i in keep for i in tri))
    uf = _UnionFind()
    for i in keep:
        uf.find(i)
    for i, j in edges:
        uf.union(i, j)
    b0 = len(uf.classes(keep))
    b2 = 1 if len(keep) == len(mesh.vertices) else 0
    chi = len(keep) - len(edges) + faces
    return 2 * b0 + 2 * b2 - chi


def half_boundary_checks(level: _Level) -> List[HalfBoundaryCheck]:
    """``b(Omega_j) = b(dOmega_j) / 2`` for each proper sublevel union of regions."""
    mesh = level.field.mesh
    values = level.region_labels.values()
    out = []
    if not values:
        return out
    for j in range(min(values), max(values)):
        keep = {i for i, r in level.region_of.items() if level.region_labels[r] <= j}
        loops = sum(1 for lo, _ in level.loop_labels if lo == j)
        out.append(HalfBoundaryCheck(j, induced_betti(mesh, keep), loops))
    return out


# -- corank 2 ------------------------------------------------------------------


def _changes(signs: Sequence[int]) -> bool:
    return 0 in signs or (1 in signs and -1 in signs)


def corank2_scan(sys: QuadricSystem, eps, p: QForm, mesh: SphereMesh, depth: int = CORANK2_DEPTH,
                 field_: Optional[SignField] = None) -> List[Tuple[float, float, float]]:
    """Triangles where both ``c_0`` and ``c_1`` change sign, refined ``depth`` times.

    ``c_0 = c_1 = 0`` exactly when the kernel has dimension at least 2, so a
    cell that keeps both sign changes after refinement is flagged.  Advisory:
    an empty list certifies nothing below the finest cell size.
    """
    fam = _family(sys, eps, p)
    if field_ is None:
        field_ = sign_field(fam, mesh)
    cache: Dict[Vec, List[int]] = {}

    def signs(v: Vec) -> List[int]:
        if v not in cache:
            cache[v] = fam.coefficient_signs(v)
        return cache[v]

    for v, cs in zip(mesh.vertices, field_.coeff_signs):
        cache[v] = cs

    def suspicious(tri) -> bool:
        s = [signs(v) for v in tri]
        return _changes([x[0] for x in s]) and _changes([x[1] for x in s])

    flags = []
    for i, j, k in mesh.triangles:
        tri = (mesh.vertices[i], mesh.vertices[j], mesh.vertices[k])
        if not suspicious(tri):
            continue
        cells = [tri]
        for _ in range(depth):
            nxt = []
            for a, b, c in cells:
                a, b, c = (tuple(2 * x for x in a), tuple(2 * x for x in b), tuple(2 * x for x in c))
                ab = tuple((x + y) // 2 for x, y in zip(a, b))
                bc = tuple((x + y) // 2 for x, y in zip(b, c))
                ac = tuple((x + y) // 2 for x, y in zip(a, c))
                for sub in ((a, ab, ac), (ab, b, bc), (ac, bc, c), (ab, bc, ac)):
                    if suspicious(sub):
                        nxt.append(sub)
            cells = nxt
            if not cells:
                break
        for a, b, c in cells:
            flags.append(_unit([x + y + z for x, y, z in zip(a, b, c)]))
    return flags


# -- driver --------------------------------------------------------------------


def analyze_level(sys: QuadricSystem, eps, p: QForm, level: int) -> _Level:
    fam = _family(sys, eps, p)
    field_ = sign_field(fam, sphere_mesh(level))
    return region_labels(field_, trace_curve(field_))


def _plot_data(level: _Level):
    mesh = level.field.mesh
    pos = level.field.positions
    segs = []
    for i, j, k in mesh.triangles:
        cut = [e for e in (tuple(sorted((i, j))), tuple(sorted((j, k))), tuple(sorted((i, k))))
               if level.field.sign(e[0]) != level.field.sign(e[1])]
        if len(cut) == 2:
            mids = [_unit([a + b for a, b in zip(_unit(pos[e[0]]), _unit(pos[e[1]]))]) for e in cut]
            segs.append((mids[0], mids[1]))
    samples = tuple((_unit(pos[i]), level.region_labels[level.region_of[i]]) for i in range(len(pos)))
    return tuple(segs), samples


def analyze_net(sys: QuadricSystem, eps, p: QForm, start_level: int = START_LEVEL,
                max_level: int = MAX_LEVEL, corank2: bool = True) -> NetAnalysis:
    """Trace at increasing mesh levels until two consecutive levels agree.

    Raises NotGeneric on corank-2 flags or label jumps, MeshTooCoarse when
    no two consecutive levels up to ``max_level`` agree.
    """
    eps = Fraction(eps)
    history = []
    prev: Optional[_Level] = None
    accepted: Optional[_Level] = None
    for level in range(start_level, max_level + 1):
        try:
            cur = analyze_level(sys, eps, p, level)
        except MeshTooCoarse as exc:
            history.append((level, f"fail:{exc.reason}"))
            prev = None
            continue
        history.append((level, cur.trace.components, tuple(sorted(cur.region_labels.values()))))
        if prev is not None and prev.signature == cur.signature:
            accepted = cur
            break
        prev = cur
    if accepted is None:
        raise MeshTooCoarse("mesh_not_stabilized", f"no two consecutive mesh levels agree up to level {max_level}")
    flags = ()
    if corank2:
        flags = tuple(corank2_scan(sys, eps, p, accepted.field.mesh, field_=accepted.field))
        if flags:
            raise NotGeneric("corank2", f"{len(flags)} cells suspected of corank 2")
    labels = accepted.region_labels
    mu, nu = max(labels.values()), min(labels.values())
    bound = topological_bound_from_data(sys.n, mu, nu, [accepted.trace.betti_sigma])
    checks = tuple(half_boundary_checks(accepted))
    for h in checks:
        if not h.holds:
            raise MeshTooCoarse("half_boundary", f"half-boundary check failed at j={h.j}: {h}")
    segs, samples = _plot_data(accepted)
    return NetAnalysis(
        sys.n, eps, accepted.field.mesh.level, accepted.trace.components, accepted.trace.betti_sigma,
        tuple(sorted(labels.items())), tuple(sorted(accepted.loop_labels)), mu, nu, flags, bound, True,
        tuple(history), checks, segs, samples,
    )
