"""Pencils of quadrics (k = 2): index labels on the circle of directions.

The circle is parametrized rationally,
``omega(t) = ((1 - t^2) / (1 + t^2), 2t / (1 + t^2))``, so that
``(1 + t^2)^(n+1) det(omega q - eps p)`` is a polynomial ``f(t)`` with
rational coefficients.  The single direction not reached by a finite
``t`` is ``omega = (-1, 0)``; it is handled through the ``t^(2n+2)``
coefficient of ``f``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple

from .bounds import BoundReport, topological_bound_from_data
from .errors import InputError, NotTransversal
from .poly import Poly, berkowitz, common_denominator, count_real_roots, is_squarefree, isolate_real_roots, poly_gcd, sturm_chain
from .qform import QForm, QuadricSystem, char_poly, fraction_str, inertia_descartes

INFINITY = "inf"


@dataclass(frozen=True)
class CirclePolynomial:
    poly: Poly
    nominal_degree: int  # 2(n+1)
    value_at_infinity: Fraction  # det(-q_1 - eps p)

    @property
    def root_at_infinity(self) -> bool:
        return self.value_at_infinity == 0


def _poly_matrix(sys: QuadricSystem, eps: Fraction, p: QForm) -> List[List[Poly]]:
    if sys.k != 2:
        raise InputError(f"pencil analysis needs k = 2, got k = {sys.k}")
    if p.dim != sys.dim:
        raise InputError("p has the wrong dimension")
    q1, q2 = sys.forms
    d = sys.dim
    return [
        [Poly([q1[i, j] - eps * p[i, j], 2 * q2[i, j], -q1[i, j] - eps * p[i, j]]) for j in range(d)]
        for i in range(d)
    ]


def circle_polynomial(sys: QuadricSystem, eps, p: QForm) -> CirclePolynomial:
    eps = Fraction(eps)
    m = _poly_matrix(sys, eps, p)
    # Berkowitz on integer entries, then undo the scaling exactly
    den = common_denominator(a for row in m for entry in row for a in entry.c)
    scaled = [[entry * den for entry in row] for row in m]
    coeffs = berkowitz(scaled, Poly.const(1), Poly())  # det(tI - M) as polys in the parameter
    det = coeffs[0] if sys.dim % 2 == 0 else -coeffs[0]
    det = det * Fraction(1, den ** sys.dim)
    inf_form = QForm(sys.dim, tuple(-a - eps * b for a, b in zip(sys.forms[0].entries, p.entries)))
    at_inf = char_poly(inf_form)[0]
    nominal = 2 * sys.dim
    if det.degree == nominal:
        assert det.lead() == at_inf
    else:
        assert at_inf == 0
    return CirclePolynomial(det, nominal, at_inf)


@dataclass(frozen=True)
class RootCount:
    count: int
    intervals: Tuple[Tuple[Fraction, Fraction], ...]
    at_infinity: bool


def sturm_count(cp: CirclePolynomial) -> RootCount:
    """Distinct roots on the circle, with isolating intervals in ``t``.

    Raises :class:`NotTransversal` unless every real root of ``f`` is
    simple and the point at infinity, when it is a root, is a simple one.
    """
    f = cp.poly
    if f.is_zero():
        raise NotTransversal("identically_zero", "det(omega q - eps p) vanishes on the whole circle")
    if f.degree > 0 and not is_squarefree(f):
        # repeated complex roots are harmless; only real ones break transversality
        g = poly_gcd(f, f.derivative())
        if count_real_roots(g) > 0:
            raise NotTransversal("multiple_root", "circle polynomial has a repeated real root")
    if cp.nominal_degree - f.degree > 1:
        raise NotTransversal("multiple_root_at_infinity", "repeated root at omega = (-1, 0)")
    intervals = tuple(isolate_real_roots(f))
    assert len(intervals) == count_real_roots(f, sturm_chain(f)) if f.degree > 0 else True
    return RootCount(len(intervals) + cp.root_at_infinity, intervals, cp.root_at_infinity)


def omega_at(t) -> Tuple[Fraction, Fraction]:
    if t == INFINITY:
        return (Fraction(-1), Fraction(0))
    t = Fraction(t)
    den = 1 + t * t
    return ((1 - t * t) / den, 2 * t / den)


def _form_at(sys: QuadricSystem, eps: Fraction, p: QForm, t) -> QForm:
    """``(1 + t^2)(omega(t) q - eps p)``, a positive multiple of the pencil member."""
    if t == INFINITY:
        w1, w2, scale = Fraction(-1), Fraction(0), Fraction(1)
    else:
        t = Fraction(t)
        w1, w2, scale = 1 - t * t, 2 * t, 1 + t * t
    q1, q2 = sys.forms
    return QForm(
        sys.dim,
        tuple(w1 * a + w2 * b - eps * scale * c for a, b, c in zip(q1.entries, q2.entries, p.entries)),
    )


def arc_samples(roots: RootCount) -> List:
    """One rational sample per arc, in circular order of increasing ``t``."""
    iv = roots.intervals
    if not iv:
        return [Fraction(0)]
    samples = [(a2 + b1) / 2 for (_, b1), (a2, _) in zip(iv, iv[1:])]
    if roots.at_infinity:
        samples.append(iv[-1][1] + 1)
        samples.insert(0, iv[0][0] - 1)
    else:
        samples.append(iv[-1][1] + 1)  # the arc through infinity
    return samples


@dataclass(frozen=True)
class HalfBoundaryCheck:
    j: int
    components: int
    boundary_points: int

    @property
    def holds(self) -> bool:
        return 2 * self.components == self.boundary_points


@dataclass(frozen=True)
class PencilAnalysis:
    n: int
    epsilon: Fraction
    root_count: int
    root_at_infinity: bool
    intervals: Tuple[Tuple[Fraction, Fraction], ...]
    samples: Tuple
    labels: Tuple[int, ...]
    mu: int
    nu: int
    bound: BoundReport
    generic_bound: BoundReport
    half_boundary: Tuple[HalfBoundaryCheck, ...] = field(default=())

    @property
    def transversal(self) -> bool:
        return True  # construction raises otherwise

    @property
    def signature(self) -> Tuple:
        return (self.root_count, canonical_cycle(self.labels))

    def as_dict(self) -> dict:
        return {
            "k": 2,
            "epsilon": fraction_str(self.epsilon),
            "root_count": self.root_count,
            "root_at_infinity": self.root_at_infinity,
            "intervals": [[fraction_str(a), fraction_str(b)] for a, b in self.intervals],
            "labels": list(self.labels),
            "mu": self.mu,
            "nu": self.nu,
            "betti_sigma": self.root_count,
            "bound": self.bound.as_dict(),
            "generic_bound": self.generic_bound.as_dict(),
            "half_boundary": [
                {"j": h.j, "components": h.components, "boundary": h.boundary_points, "holds": h.holds}
                for h in self.half_boundary
            ],
        }


def canonical_cycle(labels: Sequence[int]) -> Tuple[int, ...]:
    """Lexicographically least rotation, so cycles compare independent of start."""
    if not labels:
        return ()
    labels = tuple(labels)
    return min(labels[i:] + labels[:i] for i in range(len(labels)))


def cyclic_half_boundary(labels: Sequence[int]) -> List[HalfBoundaryCheck]:
    """For each proper level set ``{label <= j}`` of a cyclic labelling: runs vs endpoints."""
    out = []
    m = len(labels)
    if m < 2:
        return out
    for j in range(min(labels), max(labels)):
        inside = [a <= j for a in labels]
        ends = sum(inside[i] != inside[(i + 1) % m] for i in range(m))
        runs = sum(inside[i] and not inside[i - 1] for i in range(m))
        out.append(HalfBoundaryCheck(j, runs, ends))
    return out


def index_profile(sys: QuadricSystem, eps, p: QForm) -> PencilAnalysis:
    """Labels ``i^-(omega q - eps p)`` on the arcs cut out by the roots, and the bound."""
    eps = Fraction(eps)
    if eps < 0:
        raise InputError("epsilon must be nonnegative")
    cp = circle_polynomial(sys, eps, p)
    roots = sturm_count(cp)
    samples = arc_samples(roots)
    labels = tuple(inertia_descartes(_form_at(sys, eps, p, t)).neg for t in samples)
    if roots.count:
        m = len(labels)
        for i in range(m):
            if abs(labels[i] - labels[(i + 1) % m]) != 1:
                raise NotTransversal("label_jump", f"labels {labels[i]} and {labels[(i + 1) % m]} meet at a root")
    else:
        labels = labels[:1]
    mu, nu = max(labels), min(labels)
    bound = topological_bound_from_data(sys.n, mu, nu, [roots.count])
    generic = BoundReport(
        "generic", Fraction(sys.n + 1) + Fraction(roots.count, 2), {"n": sys.n, "betti_sum": roots.count}
    )
    checks = tuple(cyclic_half_boundary(labels)) if roots.count else ()
    for h in checks:
        if not h.holds:
            raise AssertionError(f"half-boundary check failed at j={h.j}: {h}")
    return PencilAnalysis(
        sys.n, eps, roots.count, roots.at_infinity, roots.intervals, tuple(samples), labels, mu, nu,
        bound, generic, checks,
    )


def root_directions(analysis: PencilAnalysis) -> List[Tuple[float, float]]:
    """Approximate root positions on the circle (midpoints of isolating intervals)."""
    out = []
    for a, b in analysis.intervals:
        w = omega_at((a + b) / 2)
        out.append((float(w[0]), float(w[1])))
    if analysis.root_at_infinity:
        out.append((-1.0, 0.0))
    return out


def arc_label_at(sys: QuadricSystem, eps, p: QForm, t) -> int:
    return inertia_descartes(_form_at(sys, Fraction(eps), p, t)).neg

