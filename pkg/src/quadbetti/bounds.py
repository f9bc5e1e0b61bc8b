"""Closed-form upper bounds on total Betti numbers.

Every evaluation is exact.  Bounds that are not integers come back as a
:class:`BoundReport` carrying the exact rational and its ceiling; the
ceiling is the usable upper bound.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb
from typing import Dict, List, Sequence

from .errors import InputError
from .qform import fraction_str
from .strata import sigma_k

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundReport:
    label: str
    exact: Fraction
    parameters: Dict[str, int] = field(default_factory=dict)
    warning: str = ""

    @property
    def value(self) -> int:
        return ceil(self.exact)

    def as_dict(self) -> dict:
        out = {
            "label": self.label,
            "value": self.value,
            "exact": fraction_str(self.exact),
            "parameters": dict(self.parameters),
        }
        if self.warning:
            out["warning"] = self.warning
        return out


def milnor_projective(n: int, d: int) -> int:
    """Milnor's bound ``n d (2d-1)^(n-1)`` for degree-``d`` sets in RP^n."""
    if n < 1 or d < 1:
        raise InputError("milnor bound needs n, d >= 1")
    return n * d * (2 * d - 1) ** (n - 1)


def milnor_quadrics(n: int) -> int:
    """The customary quadric specialization ``2n 3^n``; a factor 3 looser than
    ``milnor_projective(n, 2)`` but the form usually quoted."""
    if n < 1:
        raise InputError("milnor bound needs n >= 1")
    return 2 * n * 3 ** n


def basu_s(k: int, n: int) -> BoundReport:
    if k < 1 or n < 1:
        raise InputError("s(k, n) needs k, n >= 1")
    total = sum(comb(k, j) * comb(n + 1, j) * 2 ** j for j in range(k + 1))
    return BoundReport("basu_s", Fraction(n, 2) * total, {"k": k, "n": n})


def barvinok_symbolic(constant: int | None = None) -> str:
    """Barvinok's bound only has a symbolic form; the constant is never fixed."""
    if constant is None:
        return "n^(O(k))"
    return f"n^({constant}*k)"


def det_variety_bound(d: int, n: int, r: int, k: int) -> int:
    """Milnor-type bound on the corank->=r locus of a k-dim slice of Sym_n.

    ``delta = max(d, n - r + 1)`` is the degree of the defining equations.
    """
    if min(d, n, r, k) < 1 or r > n:
        raise InputError("need d, n, r, k >= 1 and r <= n")
    delta = max(d, n - r + 1)
    return delta * (2 * delta - 1) ** (k - 1)


def _hirzebruch_series(k: int, delta: int) -> Fraction:
    """Coefficient of x^(k-2) in 2δ(1+x)^(k+1) / ((1+2x)(1+δx))."""
    order = k - 2
    num = [Fraction(2 * delta * comb(k + 1, i)) for i in range(order + 1)]
    # multiply by 1/(1+2x) and 1/(1+δx) as geometric series
    for a in (2, delta):
        inv = [Fraction((-a) ** i) for i in range(order + 1)]
        num = [sum(num[j] * inv[i - j] for j in range(i + 1)) for i in range(order + 1)]
    return num[order]


def _hirzebruch_closed(k: int, delta: int) -> Fraction:
    total = Fraction(0)
    for j in range(k - 1):
        inner = sum(Fraction(comb(k + 1, i)) * Fraction(-1, 2) ** i for i in range(j + 1))
        total += inner * 2 ** (j + 1) * Fraction(delta) ** (k - j - 1)
    return (-1) ** k * total


def hirzebruch_chi(k: int, delta: int) -> int:
    """Euler characteristic of a smooth (2, δ) complete intersection in CP^k."""
    if k < 2 or delta < 1:
        raise InputError("hirzebruch_chi needs k >= 2, delta >= 1")
    series = _hirzebruch_series(k, delta)
    closed = _hirzebruch_closed(k, delta)
    if series != closed or series.denominator != 1:
        raise ArithmeticError(f"chi mismatch for k={k}, delta={delta}: {series} vs {closed}")
    return series.numerator


def ci_betti(k: int, delta: int) -> int:
    """Total Betti number of the (2, δ) complete intersection in CP^k."""
    b = (k - 1) * (1 + (-1) ** (k + 1)) + (-1) ** k * hirzebruch_chi(k, delta)
    if b < 0:
        raise ArithmeticError(f"negative Betti number {b} for k={k}, delta={delta}")
    return b


def ci_betti_bound(k: int, delta: int) -> BoundReport:
    if k < 2:
        raise InputError("ci_betti_bound needs k >= 2")
    exact = 2 * Fraction(delta) ** (k - 1) + Fraction(comb(k + 1, 3), 4) * Fraction(3 * delta) ** (k - 2)
    return BoundReport("ci_betti_bound", exact, {"k": k, "delta": delta})


def spherical_bound_exact(k: int, d: int) -> Fraction:
    if k < 1 or d < 1:
        raise InputError("spherical bound needs k, d >= 1")
    exact = Fraction(2 * d) ** (k - 1)
    if k >= 2:  # the correction term has a negative exponent for k = 1
        exact += Fraction(comb(k + 1, 3), 8) * Fraction(6 * d) ** (k - 2)
    return exact


def spherical_bound(k: int, d: int) -> BoundReport:
    """Bound for a set cut out by degree-``d`` equations on S^(k-1)."""
    return BoundReport("spherical", spherical_bound_exact(k, d), {"k": k, "d": d})


def numerical_bound(k: int, n: int) -> BoundReport:
    """``(n+1) + 1/2 sum_r spherical_bound(k, n-r+2)`` over the nonempty strata."""
    if k < 1 or n < 1:
        raise InputError("numerical bound needs k, n >= 1")
    s = sigma_k(k)
    exact = Fraction(n + 1) + Fraction(1, 2) * sum(
        (spherical_bound_exact(k, n - r + 2) for r in range(1, s + 1)), Fraction(0)
    )
    return BoundReport("numerical", exact, {"k": k, "n": n, "sigma_k": s})


def topological_bound_from_data(n: int, mu: int, nu: int, stratum_bettis: Sequence[int]) -> BoundReport:
    """``n + 1 - 2(mu - nu) + 1/2 sum b(Sigma^(r))``."""
    if nu > mu:
        raise InputError(f"mu={mu} < nu={nu}")
    if nu < 0 or mu > n + 1:
        raise InputError(f"labels out of range: mu={mu}, nu={nu}, n={n}")
    total = sum(stratum_bettis)
    warning = ""
    if total % 2:
        warning = "odd stratum Betti sum; reporting the ceiling"
        log.warning("%s (sum=%d)", warning, total)
    exact = Fraction(n + 1 - 2 * (mu - nu)) + Fraction(total, 2)
    return BoundReport(
        "topological", exact, {"n": n, "mu": mu, "nu": nu, "betti_sum": total}, warning
    )


C_K = {2: Fraction(2), 3: Fraction(1), 4: Fraction(2, 3), 5: Fraction(1, 3), 6: Fraction(2, 15)}


def reference_constants(n: int | None = None) -> dict:
    """Constants quoted in the literature; report-only, never used as bounds.

    With ``n`` given, the ``n``-dependent entries are evaluated too.
    """
    out = {
        "report_only": True,
        "c_k": {str(k): fraction_str(v) for k, v in C_K.items()},
        "B(1,n)": "n",
        "B(2,n)": "2n",
        "B(3,n)": "n^2+O(n)",
        "k3_refined": "n^2+n",
        "k4": "16n^3+O(n)",
        "B0(3,n)": "(n-1)(n+5)/4-2 < B0(3,n) <= 3/2 l(l-1)+2, l=floor(n/2)+1",
        "barvinok": barvinok_symbolic(),
    }
    if n is not None:
        l = n // 2 + 1
        out["at_n"] = {
            "n": n,
            "B(1,n)": n,
            "B(2,n)": 2 * n,
            "k3_refined": n * n + n,
            "k4_leading": 16 * n ** 3,
            "B0(3,n)_lower": fraction_str(Fraction((n - 1) * (n + 5), 4) - 2),
            "B0(3,n)_upper": fraction_str(Fraction(3, 2) * l * (l - 1) + 2),
        }
    return out


def all_closed_form(k: int, n: int) -> List[BoundReport]:
    """Every closed-form bound for (k, n), in a fixed order."""
    rows = [
        BoundReport("milnor", Fraction(milnor_projective(n, 2)), {"n": n, "d": 2}),
        BoundReport("milnor_2n3^n", Fraction(milnor_quadrics(n)), {"n": n}),
        basu_s(k, n),
        numerical_bound(k, n),
    ]
    for r in range(1, sigma_k(k) + 1):
        rep = spherical_bound(k, n - r + 2)
        rows.append(BoundReport(f"spherical_r{r}", rep.exact, dict(rep.parameters, r=r)))
    if k >= 2:
        rows.append(ci_betti_bound(k, n + 1))
    return rows
