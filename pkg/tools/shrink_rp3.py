"""Shrink the cube-quotient RP^3 to a small vertex count by edge contractions.

An edge ``uv`` of a combinatorial 3-manifold may be contracted without
changing the PL type when ``lk(u) & lk(v) == lk(uv)`` (link condition).
Random greedy passes with restarts; prints the facet list of the
smallest triangulation found.

    python3 tools/shrink_rp3.py [target] [seed]
"""

import random
import sys
from itertools import combinations

from quadbetti.complexes import projective_space
from quadbetti.homology import SimplicialComplex, betti_z2


def closure(facets):
    out = set()
    for f in facets:
        for k in range(1, len(f) + 1):
            out.update(frozenset(c) for c in combinations(sorted(f), k))
    return out


def link(faces, sigma):
    return {f - sigma for f in faces if sigma <= f and f != sigma}


def try_contract(facets, u, v):
    faces = closure(facets)
    lu, lv = link(faces, frozenset([u])), link(faces, frozenset([v]))
    if (lu & lv) != link(faces, frozenset([u, v])):
        return None
    new = set()
    for f in facets:
        if u in f and v in f:
            continue
        g = frozenset(u if w == v else w for w in f)
        new.add(g)
    return new


def shrink(facets, rng, target):
    facets = {frozenset(f) for f in facets}
    while True:
        verts = {v for f in facets for v in f}
        if len(verts) <= target:
            return facets
        edges = sorted({frozenset(e) for f in facets for e in combinations(sorted(f), 2)}, key=sorted)
        rng.shuffle(edges)
        for e in edges:
            u, v = sorted(e)
            new = try_contract(facets, u, v)
            if new is not None:
                facets = new
                break
        else:
            return facets


def main():
    target = int(sys.argv[1]) if len(sys.argv) > 1 else 11
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else 0
    base = projective_space(3, 1).maximal_simplices
    best = None
    for attempt in range(200):
        rng = random.Random(seed + attempt)
        facets = shrink(base, rng, target)
        nv = len({v for f in facets for v in f})
        if best is None or nv < best[0]:
            best = (nv, facets)
            print(f"attempt {attempt}: {nv} vertices, {len(facets)} facets", file=sys.stderr)
        if nv <= target:
            break
    cx = SimplicialComplex.from_simplices(sorted(tuple(sorted(f)) for f in best[1]))
    print("betti", betti_z2(cx).betti, file=sys.stderr)
    for s in cx.maximal_simplices:
        print(s)


if __name__ == "__main__":
    main()
