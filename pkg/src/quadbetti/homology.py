"""Z/2 simplicial homology by elimination over GF(2).

Boundary matrices are stored column-wise as Python ints used as bit
vectors, which keeps the elimination fast enough for complexes with
tens of thousands of simplices.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from .errors import InputError


@dataclass(frozen=True)
class SimplicialComplex:
    vertex_count: int
    maximal_simplices: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        for s in self.maximal_simplices:
            if not s:
                raise InputError("empty simplex")
            if any(v < 0 or v >= self.vertex_count for v in s):
                raise InputError(f"vertex index out of range in {s}")
            if len(set(s)) != len(s):
                raise InputError(f"repeated vertex in {s}")

    @classmethod
    def from_simplices(cls, simplices: Iterable[Iterable[int]]) -> "SimplicialComplex":
        """Build from arbitrary vertex labels, relabelling to 0..V-1."""
        simplices = [tuple(s) for s in simplices]
        labels = sorted({v for s in simplices for v in s})
        index = {v: i for i, v in enumerate(labels)}
        return cls(len(labels), tuple(tuple(sorted(index[v] for v in s)) for s in simplices))

    @property
    def dimension(self) -> int:
        return max((len(s) - 1 for s in self.maximal_simplices), default=-1)

    def is_empty(self) -> bool:
        return not self.maximal_simplices

    def faces(self) -> List[List[Tuple[int, ...]]]:
        """All faces, grouped by dimension, each group sorted."""
        by_dim: List[set] = [set() for _ in range(self.dimension + 1)]
        for s in self.maximal_simplices:
            s = tuple(sorted(s))
            for size in range(1, len(s) + 1):
                by_dim[size - 1].update(combinations(s, size))
        return [sorted(group) for group in by_dim]

    def disjoint_union(self, other: "SimplicialComplex") -> "SimplicialComplex":
        shift = self.vertex_count
        return SimplicialComplex(
            self.vertex_count + other.vertex_count,
            self.maximal_simplices + tuple(tuple(v + shift for v in s) for s in other.maximal_simplices),
        )

    def to_text(self) -> str:
        return "".join(" ".join(map(str, s)) + "\n" for s in self.maximal_simplices)

    @classmethod
    def from_text(cls, text: str) -> "SimplicialComplex":
        simplices = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                simplices.append(tuple(int(tok) for tok in line.split()))
            except ValueError as exc:
                raise InputError(f"line {lineno}: expected vertex indices") from exc
        count = max((v for s in simplices for v in s), default=-1) + 1
        return cls(count, tuple(simplices))

    def save(self, path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path) -> "SimplicialComplex":
        return cls.from_text(Path(path).read_text())


@dataclass(frozen=True)
class BettiVector:
    betti: Tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.betti)

    @property
    def euler(self) -> int:
        return sum((-1) ** i * b for i, b in enumerate(self.betti))

    def as_dict(self) -> dict:
        return {"betti": list(self.betti), "total": self.total}


def gf2_rank(columns: List[int]) -> int:
    """Rank of a GF(2) matrix given as a list of int bitmask columns."""
    pivots: Dict[int, int] = {}
    rank = 0
    for col in columns:
        while col:
            top = col.bit_length() - 1
            if top in pivots:
                col ^= pivots[top]
            else:
                pivots[top] = col
                rank += 1
                break
    return rank


def boundary_columns(lower: Sequence[Tuple[int, ...]], upper: Sequence[Tuple[int, ...]]) -> List[int]:
    index = {f: i for i, f in enumerate(lower)}
    cols = []
    for s in upper:
        mask = 0
        for i in range(len(s)):
            mask |= 1 << index[s[:i] + s[i + 1:]]
        cols.append(mask)
    return cols


def betti_z2(complex_: SimplicialComplex) -> BettiVector:
    faces = complex_.faces()
    if not faces:
        return BettiVector(())
    ranks = [0] * (len(faces) + 1)  # ranks[d] = rank of boundary C_d -> C_{d-1}
    for d in range(1, len(faces)):
        ranks[d] = gf2_rank(boundary_columns(faces[d - 1], faces[d]))
    betti = tuple(len(faces[d]) - ranks[d] - ranks[d + 1] for d in range(len(faces)))
    return BettiVector(betti)


def euler_from_counts(complex_: SimplicialComplex) -> int:
    return sum((-1) ** d * len(group) for d, group in enumerate(complex_.faces()))


def boundary_complex(complex_: SimplicialComplex) -> SimplicialComplex:
    """Codimension-one faces lying in exactly one top simplex (pure complexes)."""
    top = complex_.dimension
    counts: Dict[Tuple[int, ...], int] = {}
    for s in complex_.maximal_simplices:
        if len(s) - 1 != top:
            raise InputError("boundary_complex needs a pure complex")
        s = tuple(sorted(s))
        for i in range(len(s)):
            f = s[:i] + s[i + 1:]
            counts[f] = counts.get(f, 0) + 1
    faces = [f for f, c in sorted(counts.items()) if c == 1]
    return SimplicialComplex(complex_.vertex_count, tuple(faces))


def verify_half_boundary(m: SimplicialComplex, boundary: SimplicialComplex) -> bool:
    """``b(M) == b(dM) / 2`` for a manifold with boundary inside a sphere."""
    return 2 * betti_z2(m).total == betti_z2(boundary).total


def induced_subcomplex(maximal: Iterable[FrozenSet[int] | Tuple[int, ...]], keep) -> List[Tuple[int, ...]]:
    """Faces of ``maximal`` spanned by kept vertices (maximal ones only not required)."""
    out = set()
    for s in maximal:
        kept = tuple(sorted(v for v in s if v in keep))
        if kept:
            out.add(kept)
    return sorted(out)
