"""Exact rational quadratic forms and their inertia.

A quadratic form in ``dim`` variables is stored as the lower triangle of
its symmetric matrix ``Q`` with ``q(x) = <x, Qx>``.  Coefficients are
:class:`fractions.Fraction` throughout.

Inertia is computed two ways that share no code:

* :func:`inertia_descartes` counts sign variations of the characteristic
  polynomial.  Every root of the characteristic polynomial of a real
  symmetric matrix is real, and for a polynomial with only real roots
  Descartes' rule is exact, so the count of variations is the number of
  positive eigenvalues.
* :func:`inertia_ldl` runs symmetric Gaussian elimination with 1x1 and
  2x2 pivots (Sylvester's law of inertia).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .errors import InputError
from .poly import berkowitz, common_denominator, sign_variations

Matrix = List[List[Fraction]]


def as_fraction(value) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"malformed rational {value!r}") from exc
    if isinstance(value, float):
        raise InputError(f"floats are not accepted, got {value!r}; use 'p/q'")
    raise InputError(f"not a rational: {value!r}")


def fraction_str(a: Fraction) -> str:
    return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


@dataclass(frozen=True)
class Inertia:
    pos: int
    neg: int
    null: int

    @property
    def dim(self) -> int:
        return self.pos + self.neg + self.null


@dataclass(frozen=True)
class QForm:
    dim: int
    entries: Tuple[Fraction, ...]  # row-major lower triangle: (0,0),(1,0),(1,1),(2,0),...

    def __post_init__(self):
        if self.dim < 1:
            raise InputError("form dimension must be positive")
        if len(self.entries) != self.dim * (self.dim + 1) // 2:
            raise InputError("wrong number of lower-triangular entries")

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence]) -> "QForm":
        dim = len(rows)
        if any(len(r) != dim for r in rows):
            raise InputError("matrix is not square")
        m = [[as_fraction(a) for a in r] for r in rows]
        for i in range(dim):
            for j in range(i):
                if m[i][j] != m[j][i]:
                    raise InputError(f"matrix is not symmetric at ({i},{j})")
        return cls(dim, tuple(m[i][j] for i in range(dim) for j in range(i + 1)))

    @classmethod
    def diag(cls, values: Sequence) -> "QForm":
        d = len(values)
        return cls.from_matrix([[values[i] if i == j else 0 for j in range(d)] for i in range(d)])

    @classmethod
    def identity(cls, dim: int) -> "QForm":
        return cls.diag([1] * dim)

    @classmethod
    def zero(cls, dim: int) -> "QForm":
        return cls(dim, (Fraction(0),) * (dim * (dim + 1) // 2))

    def __getitem__(self, ij: Tuple[int, int]) -> Fraction:
        i, j = ij
        if i < j:
            i, j = j, i
        return self.entries[i * (i + 1) // 2 + j]

    def matrix(self) -> Matrix:
        return [[self[i, j] for j in range(self.dim)] for i in range(self.dim)]

    def __add__(self, other: "QForm") -> "QForm":
        _check_dims(self, other)
        return QForm(self.dim, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "QForm") -> "QForm":
        _check_dims(self, other)
        return QForm(self.dim, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def scale(self, c) -> "QForm":
        c = Fraction(c)
        return QForm(self.dim, tuple(c * a for a in self.entries))

    def max_abs_entry(self) -> Fraction:
        return max(abs(a) for a in self.entries)


def _check_dims(a: QForm, b: QForm):
    if a.dim != b.dim:
        raise InputError(f"dimension mismatch: {a.dim} vs {b.dim}")


@dataclass(frozen=True)
class QuadricSystem:
    n: int
    forms: Tuple[QForm, ...]

    def __post_init__(self):
        if not self.forms:
            raise InputError("need at least one form")
        if self.n < 0:
            raise InputError("n must be nonnegative")
        for q in self.forms:
            if q.dim != self.n + 1:
                raise InputError(f"form of dim {q.dim} in a system with n={self.n}")

    @classmethod
    def of(cls, *forms: QForm) -> "QuadricSystem":
        return cls(forms[0].dim - 1, tuple(forms))

    @property
    def k(self) -> int:
        return len(self.forms)

    @property
    def dim(self) -> int:
        return self.n + 1

    def max_abs_entry(self) -> Fraction:
        return max(q.max_abs_entry() for q in self.forms)


def evaluate(q: QForm, x: Sequence) -> Fraction:
    if len(x) != q.dim:
        raise InputError(f"vector of length {len(x)} for a form of dim {q.dim}")
    x = [Fraction(a) for a in x]
    total = Fraction(0)
    for i in range(q.dim):
        total += q[i, i] * x[i] * x[i]
        for j in range(i):
            total += 2 * q[i, j] * x[i] * x[j]
    return total


def char_poly(q: QForm) -> List[Fraction]:
    """Coefficients of ``det(Q - tI)``, ascending in ``t``."""
    coeffs = berkowitz(q.matrix(), Fraction(1), Fraction(0))  # det(tI - Q)
    sign = -1 if q.dim % 2 else 1
    return [sign * c for c in coeffs]


def inertia_from_coeffs(coeffs: Sequence) -> Inertia:
    """Inertia from the (signs of the) coefficients of ``det(Q - tI)``."""
    dim = len(coeffs) - 1
    null = 0
    while null < dim and coeffs[null] == 0:
        null += 1
    pos = sign_variations(coeffs[null:])
    return Inertia(pos, dim - pos - null, null)


def inertia_descartes(q: QForm) -> Inertia:
    # a positive multiple has the same inertia; integers keep Berkowitz cheap
    den = common_denominator(q.entries)
    ints = [[int(a * den) for a in row] for row in q.matrix()]
    coeffs = berkowitz(ints, 1, 0)
    if q.dim % 2:
        coeffs = [-c for c in coeffs]
    return inertia_from_coeffs(coeffs)


def inertia_ldl(q: QForm) -> Inertia:
    a = q.matrix()
    pos = neg = 0
    while a:
        m = len(a)
        piv = next((i for i in range(m) if a[i][i] != 0), None)
        if piv is not None:
            d = a[piv][piv]
            if d > 0:
                pos += 1
            else:
                neg += 1
            a = _schur_1x1(a, piv)
            continue
        off = next(((i, j) for i in range(m) for j in range(i) if a[i][j] != 0), None)
        if off is None:
            break  # remaining block is zero
        # zero diagonal with a_ij != 0: the 2x2 block has determinant -a_ij^2 < 0
        pos += 1
        neg += 1
        a = _schur_2x2(a, *off)
    return Inertia(pos, neg, q.dim - pos - neg)


def _schur_1x1(a: Matrix, p: int) -> Matrix:
    d = a[p][p]
    rest = [i for i in range(len(a)) if i != p]
    return [[a[i][j] - a[i][p] * a[p][j] / d for j in rest] for i in rest]


def _schur_2x2(a: Matrix, i0: int, j0: int) -> Matrix:
    e11, e12, e22 = a[i0][i0], a[i0][j0], a[j0][j0]
    dt = e11 * e22 - e12 * e12
    inv = ((e22 / dt, -e12 / dt), (-e12 / dt, e11 / dt))
    rest = [i for i in range(len(a)) if i not in (i0, j0)]
    out = []
    for i in rest:
        bi = (a[i][i0], a[i][j0])
        row = []
        for j in rest:
            bj = (a[j][i0], a[j][j0])
            corr = (
                bi[0] * (inv[0][0] * bj[0] + inv[0][1] * bj[1])
                + bi[1] * (inv[1][0] * bj[0] + inv[1][1] * bj[1])
            )
            row.append(a[i][j] - corr)
        out.append(row)
    return out


def rank(rows: Sequence[Sequence]) -> int:
    """Rank by plain row reduction (no symmetry used)."""
    m = [[Fraction(x) for x in r] for r in rows]
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, len(m)):
            f = m[i][c] / m[r][c]
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
    return r


def determinant(q: QForm) -> Fraction:
    return char_poly(q)[0]


def combine(sys: QuadricSystem, omega: Sequence, eps, p: QForm) -> QForm:
    """``omega_1 q_1 + ... + omega_k q_k - eps * p``."""
    if len(omega) != sys.k:
        raise InputError(f"weight vector of length {len(omega)} for k={sys.k}")
    _check_dims(sys.forms[0], p)
    eps = Fraction(eps)
    acc = [-eps * a for a in p.entries]
    for w, q in zip(omega, sys.forms):
        w = Fraction(w)
        if w:
            acc = [x + w * a for x, a in zip(acc, q.entries)]
    return QForm(p.dim, tuple(acc))


def congruence(q: QForm, m: Sequence[Sequence]) -> QForm:
    """``M^T Q M``."""
    a = q.matrix()
    d = q.dim
    mf = [[Fraction(x) for x in r] for r in m]
    am = [[sum(a[i][l] * mf[l][j] for l in range(d)) for j in range(d)] for i in range(d)]
    return QForm.from_matrix(
        [[sum(mf[l][i] * am[l][j] for l in range(d)) for j in range(d)] for i in range(d)]
    )
