import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadbetti.complexes import CURATED, curated_complexes, projective_space
from quadbetti.errors import InputError
from quadbetti.homology import (
    SimplicialComplex,
    betti_z2,
    boundary_complex,
    euler_from_counts,
    gf2_rank,
    verify_half_boundary,
)

EXPECTED = {
    "circle": (1, 1),
    "disk": (1, 0, 0),
    "sphere2": (1, 0, 1),
    "torus7": (1, 2, 1),
    "rp2_6": (1, 1, 1),
    "rp3_11": (1, 1, 1, 1),
}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_curated_betti(name):
    assert betti_z2(curated_complexes(name)).betti == EXPECTED[name]


def test_curated_names():
    assert set(CURATED) == set(EXPECTED)
    with pytest.raises(InputError):
        curated_complexes("klein")


def test_gf2_rank():
    assert gf2_rank([0b011, 0b110, 0b101]) == 2
    assert gf2_rank([]) == 0


def test_half_boundary_disk_and_annulus():
    disk = curated_complexes("disk")
    assert betti_z2(boundary_complex(disk)).betti[:2] == (1, 1)
    assert verify_half_boundary(disk, boundary_complex(disk))
    # annulus: triangulated band between two hexagons
    inner, outer = range(6), range(6, 12)
    tris = []
    for i in range(6):
        a, b = inner[i], inner[(i + 1) % 6]
        c, d = outer[i], outer[(i + 1) % 6]
        tris += [(a, b, c), (b, c, d)]
    annulus = SimplicialComplex.from_simplices(tris)
    assert betti_z2(annulus).betti == (1, 1, 0)
    assert verify_half_boundary(annulus, boundary_complex(annulus))


def test_text_round_trip(tmp_path):
    cx = curated_complexes("torus7")
    path = tmp_path / "t.txt"
    cx.save(path)
    back = SimplicialComplex.load(path)
    assert betti_z2(back) == betti_z2(cx)
    with pytest.raises(InputError):
        SimplicialComplex.from_text("0 1\n1 x\n")


@pytest.mark.parametrize("n, N", [(1, 2), (2, 2), (2, 3), (3, 2)])
def test_projective_space_quotient(n, N):
    assert betti_z2(projective_space(n, N)).betti == (1,) * (n + 1)


complexes = st.sampled_from(sorted(CURATED)).map(curated_complexes)


@settings(max_examples=25, deadline=None)
@given(complexes, complexes)
def test_disjoint_union_additive(a, b):
    ba, bb, bu = betti_z2(a), betti_z2(b), betti_z2(a.disjoint_union(b))
    assert bu.total == ba.total + bb.total
    width = max(len(ba.betti), len(bb.betti))
    pad = lambda v: v + (0,) * (width - len(v))  # noqa: E731
    assert bu.betti == tuple(x + y for x, y in zip(pad(ba.betti), pad(bb.betti)))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(0, 7), min_size=1, max_size=4, unique=True), min_size=1, max_size=12))
def test_euler_characteristic_two_ways(simplices):
    cx = SimplicialComplex.from_simplices(simplices)
    assert betti_z2(cx).euler == euler_from_counts(cx)
    assert all(b >= 0 for b in betti_z2(cx).betti)
