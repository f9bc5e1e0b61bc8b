"""Exact polynomial arithmetic over the rationals.

Two small polynomial types live here: a dense univariate :class:`Poly`
used for root counting on the circle, and a sparse multivariate
:class:`MPoly` used to precompute characteristic polynomials of linear
families of symmetric matrices.  Both support ``+``, ``-``, ``*`` with
each other's scalars, which is all :func:`berkowitz` needs.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Sequence, Tuple


def _trim(coeffs: List[Fraction]) -> List[Fraction]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


class Poly:
    """Dense univariate polynomial, coefficients in ascending powers."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        self.c = _trim([Fraction(a) for a in coeffs])

    @classmethod
    def const(cls, a) -> "Poly":
        return cls([a])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.c) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.c

    def lead(self) -> Fraction:
        return self.c[-1] if self.c else Fraction(0)

    def __repr__(self):
        return f"Poly({[str(a) for a in self.c]})"

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self.c == other.c

    def __hash__(self):
        return hash(tuple(self.c))

    def _coerce(self, other) -> "Poly":
        return other if isinstance(other, Poly) else Poly.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] += v
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-a for a in self.c])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            other = Fraction(other)
            return Poly([a * other for a in self.c])
        if not self.c or not other.c:
            return Poly()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j, b in enumerate(other.c):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __call__(self, t) -> Fraction:
        acc = Fraction(0)
        for a in reversed(self.c):
            acc = acc * t + a
        return acc

    def derivative(self) -> "Poly":
        return Poly([i * a for i, a in enumerate(self.c)][1:])

    def divmod(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        dq = len(r) - len(other.c)
        if dq < 0:
            return Poly(), Poly(r)
        q = [Fraction(0)] * (dq + 1)
        lead = other.c[-1]
        for i in range(dq, -1, -1):
            f = r[i + len(other.c) - 1] / lead
            q[i] = f
            if f:
                for j, b in enumerate(other.c):
                    r[i + j] -= f * b
        return Poly(q), Poly(r[: len(other.c) - 1])

    def monic(self) -> "Poly":
        if not self.c:
            return self
        return self * (1 / self.c[-1])


# Remainder sequences run on primitive integer coefficient lists: clearing
# denominators and dividing out the content only rescales by positive
# constants, so signs (and hence Sturm counts) are unchanged.


def common_denominator(values: Iterable) -> int:
    """Least common multiple of the denominators of ``values``."""
    den = 1
    for a in values:
        den = den * a.denominator // gcd(den, a.denominator)
    return den


def _primitive(c: Sequence) -> List[int]:
    """Positive multiple of ``c`` with coprime integer coefficients."""
    den = common_denominator(c)
    ints = [int(a * den) for a in c]
    g = 0
    for a in ints:
        g = gcd(g, a)
    return [a // g for a in ints] if g > 1 else ints


def _neg_prem(f: List[int], g: List[int]) -> List[int]:
    """Primitive part of ``-c * rem(f, g)`` for some constant ``c > 0``."""
    r = list(f)
    dg, lg = len(g) - 1, g[-1]
    steps = 0  # r = lg^steps * f - (multiple of g)
    while r and len(r) - 1 >= dg:
        lr, shift = r[-1], len(r) - 1 - dg
        r = [lg * x for x in r]
        for j, y in enumerate(g):
            r[shift + j] -= lr * y
        r.pop()
        while r and r[-1] == 0:
            r.pop()
        steps += 1
    if not r:
        return r
    if lg > 0 or steps % 2 == 0:
        r = [-x for x in r]
    return _primitive(r)


def _int_derivative(f: List[int]) -> List[int]:
    return [i * a for i, a in enumerate(f)][1:]


def _int_sturm(f: Poly) -> List[List[int]]:
    chain = [_primitive(f.c)]
    d = _int_derivative(chain[0])
    if d:
        chain.append(_primitive(d))
    while len(chain) > 1 and len(chain[-1]) > 1:
        r = _neg_prem(chain[-2], chain[-1])
        if not r:
            break
        chain.append(r)
    return chain


def poly_gcd(a: Poly, b: Poly) -> Poly:
    if b.is_zero():
        return a.monic()
    if a.is_zero():
        return b.monic()
    x, y = _primitive(a.c), _primitive(b.c)
    if len(x) < len(y):
        x, y = y, x
    while y and len(y) > 1:
        x, y = y, _neg_prem(x, y)
    if y:  # a nonzero constant remainder: coprime
        return Poly([1])
    return Poly(x).monic()


def is_squarefree(f: Poly) -> bool:
    if f.is_zero():
        return False
    return poly_gcd(f, f.derivative()).degree == 0


# -- Sturm sequences ---------------------------------------------------------


def sturm_chain(f: Poly) -> List[Poly]:
    """Sturm sequence of ``f`` up to positive factors per element."""
    if f.is_zero():
        return []
    return [Poly(c) for c in _int_sturm(f)]


def _sign(a) -> int:
    return (a > 0) - (a < 0)


def sign_variations(seq: Sequence) -> int:
    """Number of sign changes in ``seq``, zeros skipped."""
    count, prev = 0, 0
    for a in seq:
        s = _sign(a)
        if s == 0:
            continue
        if prev and s != prev:
            count += 1
        prev = s
    return count


def _homogeneous_value(c: Sequence, num: int, den: int) -> int:
    """``den^deg * p(num/den)`` in integers; same sign as ``p(num/den)`` for ``den > 0``."""
    acc, dpow = 0, 1
    for a in reversed(c):
        acc = acc * num + int(a) * dpow
        dpow *= den
    return acc


def _variations_at(chain: List[Poly], t) -> int:
    t = Fraction(t)
    return sign_variations([_homogeneous_value(p.c, t.numerator, t.denominator) for p in chain])


def _variations_at_infinity(chain: List[Poly], sign: int) -> int:
    return sign_variations([p.lead() * (sign ** p.degree) for p in chain])


def cauchy_bound(f: Poly) -> Fraction:
    """All real roots of ``f`` lie strictly inside (-B, B)."""
    lead = abs(f.lead())
    return 1 + max((abs(a) / lead for a in f.c[:-1]), default=Fraction(0))


def count_real_roots(f: Poly, chain: List[Poly] | None = None) -> int:
    chain = chain or sturm_chain(f)
    return _variations_at_infinity(chain, -1) - _variations_at_infinity(chain, 1)


def isolate_real_roots(f: Poly) -> List[Tuple[Fraction, Fraction]]:
    """Disjoint open intervals ``(a, b)``, one per distinct real root.

    Endpoints are never roots; neighbouring intervals may share an
    endpoint.  Requires ``f`` squarefree for the counts to be distinct
    roots (Sturm counts distinct roots regardless, so this only matters
    for callers relying on simplicity).
    """
    if f.degree < 1:
        return []
    chain = sturm_chain(f)
    if count_real_roots(f, chain) == 0:
        return []
    bound = cauchy_bound(f)
    lo, hi = -bound, bound
    out: List[Tuple[Fraction, Fraction]] = []
    stack = [(lo, hi, _variations_at(chain, lo), _variations_at(chain, hi))]
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        c = _split_point(f, a, b)
        vc = _variations_at(chain, c)
        stack.append((a, c, va, vc))
        stack.append((c, b, vc, vb))
    out.sort()
    return out


def _split_point(f: Poly, a: Fraction, b: Fraction) -> Fraction:
    c = (a + b) / 2
    step = (b - a) / 16
    k = 1
    while f(c) == 0:
        c = (a + b) / 2 + k * step / (k + 7)
        k += 1
    return c


# -- multivariate ------------------------------------------------------------

Monomial = Tuple[int, ...]


class MPoly:
    """Sparse polynomial in a fixed number of variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Dict[Monomial, Fraction] | None = None):
        self.nvars = nvars
        self.terms = {m: c for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def const(cls, nvars: int, a) -> "MPoly":
        return cls(nvars, {(0,) * nvars: Fraction(a)})

    @classmethod
    def var(cls, nvars: int, i: int) -> "MPoly":
        m = [0] * nvars
        m[i] = 1
        return cls(nvars, {tuple(m): Fraction(1)})

    def _coerce(self, other) -> "MPoly":
        return other if isinstance(other, MPoly) else MPoly.const(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return MPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            other = Fraction(other)
            return MPoly(self.nvars, {m: c * other for m, c in self.terms.items()})
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return MPoly(self.nvars, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, MPoly) and self.terms == other.terms

    def __repr__(self):
        return f"MPoly({self.nvars}, {self.terms})"

    def is_zero(self) -> bool:
        return not self.terms

    def evaluate(self, point: Sequence) -> Fraction:
        acc = Fraction(0)
        for m, c in self.terms.items():
            term = c
            for x, e in zip(point, m):
                if e:
                    term *= x ** e
            acc += term
        return acc

    def specialize_last(self, point: Sequence) -> Poly:
        """Substitute the first ``nvars - 1`` variables; univariate in the last."""
        coeffs: Dict[int, Fraction] = {}
        for m, c in self.terms.items():
            term = c
            for x, e in zip(point, m[:-1]):
                if e:
                    term *= x ** e
            coeffs[m[-1]] = coeffs.get(m[-1], 0) + term
        if not coeffs:
            return Poly()
        return Poly([coeffs.get(i, 0) for i in range(max(coeffs) + 1)])


# -- Berkowitz ---------------------------------------------------------------


def berkowitz(matrix: Sequence[Sequence], one, zero) -> list:
    """Coefficients of ``det(tI - A)`` in ascending powers of ``t``.

    Division free, so ``matrix`` may hold entries from any commutative
    ring (rationals, :class:`Poly`, :class:`MPoly`).
    """
    n = len(matrix)
    if n == 0:
        return [one]
    # vect holds the coefficients in descending order: t^k, t^{k-1}, ..., 1
    vect = [one, -matrix[0][0]]
    for r in range(1, n):
        row = [matrix[r][j] for j in range(r)]  # R
        col = [matrix[i][r] for i in range(r)]  # C
        a = [[matrix[i][j] for j in range(r)] for i in range(r)]
        # Toeplitz column: 1, -a_rr, -R C, -R A C, -R A^2 C, ...
        t_col = [one, -matrix[r][r]]
        cur = col
        for _ in range(r):
            s = zero
            for x, y in zip(row, cur):
                s = s + x * y
            t_col.append(-s)
            cur = [_dot(a[i], cur, zero) for i in range(r)]
        # multiply (r+2) x (r+1) lower Toeplitz matrix by vect
        new = []
        for i in range(r + 2):
            s = zero
            for j in range(min(i + 1, len(vect))):
                s = s + t_col[i - j] * vect[j]
            new.append(s)
        vect = new
    return list(reversed(vect))


def _dot(row, vec, zero):
    s = zero
    for x, y in zip(row, vec):
        s = s + x * y
    return s


def det(matrix: Sequence[Sequence], one, zero):
    n = len(matrix)
    c0 = berkowitz(matrix, one, zero)[0]
    return c0 if n % 2 == 0 else -c0
