"""Polyhedra, complexes, fans: construction, faces, completeness."""

from fractions import Fraction as F

import pytest

from tvarone.exceptions import IntersectionNotFace, TVarError
from tvarone.polyhedra import (
    build_complex,
    build_fan,
    cone_from_rays,
    faces_of,
    homogenize,
    intersect,
    is_complete,
    polyhedron,
    polyhedron_from_hrep,
    recession_cone,
    recession_fan,
)


def segment(a, b):
    return polyhedron(1, [(F(a),), (F(b),)])


def halfline(v, d):
    return polyhedron(1, [(F(v),)], [(d,)])


@pytest.fixture
def slice_zero():
    # three cells: (-inf,-1/2], [-1/2,0], [0,inf)
    return [halfline(F(-1, 2), -1), segment(F(-1, 2), 0), halfline(0, 1)]


def test_recession_cone_examples():
    assert recession_cone(segment(F(-1, 2), 0)).rays == ()
    assert recession_cone(halfline(F(-1, 2), -1)).rays == ((-1,),)
    assert recession_cone(polyhedron(1, [(0,)])).rays == ()


def test_build_complex_counts(slice_zero):
    c = build_complex(slice_zero)
    assert len(c.maximal_keys) == 3
    assert len(c.cells_of_dim(0)) == 2
    assert len(c.cells) == 5


def test_build_complex_two_cells():
    c = build_complex([halfline(0, -1), halfline(0, 1)])
    assert len(c.maximal_keys) == 2
    assert len(c.cells_of_dim(0)) == 1


def test_build_complex_rejects_overlap():
    with pytest.raises(IntersectionNotFace):
        build_complex([segment(0, 1), segment(F(1, 2), 2)])


def test_build_complex_rejects_nested():
    with pytest.raises(TVarError):
        build_complex([segment(0, 2), segment(0, 1)])


def test_is_complete(slice_zero):
    assert is_complete(build_complex(slice_zero))
    assert not is_complete(build_complex([halfline(0, 1)]))
    fan = build_fan([cone_from_rays(1, [(-1,)]), cone_from_rays(1, [(1,)])])
    assert is_complete(fan)


def test_is_complete_needs_matching_recessions():
    # two bounded cells cover nothing at infinity
    assert not is_complete(build_complex([segment(0, 1), segment(1, 2)]))


def test_homogenize_examples():
    c = homogenize(segment(F(-1, 2), 0), 1)
    assert set(c.rays) == {(-1, 2), (0, 1)}
    c = homogenize(halfline(0, -1), -1)
    assert set(c.rays) == {(0, -1), (-1, 0)}
    ray = cone_from_rays(1, [(1,)])
    assert homogenize(ray, 1).rays == ((0, 1), (1, 0))


def test_homogenize_height_zero_slice_matches_recession(slice_zero):
    # recession of the homogenized cone at height 0 equals the recession cone
    for cell in slice_zero:
        hc = homogenize(cell, 1)
        at_zero = polyhedron_from_hrep(
            2, hc.inequalities, hc.equations + (((0, 1), 0),)
        )
        rc = recession_cone(cell)
        assert {r[:1] for r in at_zero.rays} == set(rc.rays)


def test_vrep_hrep_round_trip():
    examples = [
        segment(F(-1, 2), 0),
        halfline(3, 1),
        polyhedron(2, [(0, 0), (1, 0), (0, 1)]),
        polyhedron(2, [(F(1, 2), F(-1, 3))], [(1, 0), (1, 2)]),
        polyhedron(2, [(0, 0), (2, 0)], [(0, -1)]),
    ]
    for p in examples:
        q = polyhedron_from_hrep(p.ambient_rank, p.inequalities, p.equations)
        assert q is not None and q.key == p.key


def test_redundant_generators_pruned():
    p = polyhedron(1, [(0,), (F(1, 2),), (1,)])
    assert p.key == segment(0, 1).key
    q = polyhedron(2, [(0, 0)], [(1, 0), (2, 0), (1, 1)])
    assert q.rays == ((1, 0), (1, 1))


def test_empty_polyhedron_rejected():
    with pytest.raises(TVarError):
        polyhedron(1, [])


def test_nonpointed_cone_rejected():
    with pytest.raises(TVarError):
        cone_from_rays(1, [(1,), (-1,)])


def test_build_complex_idempotent(slice_zero):
    c = build_complex(slice_zero)
    again = build_complex(list(c.maximal_cells()))
    assert set(again.cells) == set(c.cells)
    assert again.maximal_keys == c.maximal_keys


def test_rank1_euler_count():
    # complete rank-1 complexes: number of maximal cells = vertices + 1
    for cells in [
        [halfline(0, -1), halfline(0, 1)],
        [halfline(-1, -1), segment(-1, F(1, 3)), halfline(F(1, 3), 1)],
        [halfline(0, -1), segment(0, 1), segment(1, 5), halfline(5, 1)],
    ]:
        c = build_complex(cells)
        assert is_complete(c)
        assert len(c.maximal_keys) == len(c.cells_of_dim(0)) + 1


def test_faces_of_triangle():
    t = polyhedron(2, [(0, 0), (1, 0), (0, 1)])
    fs = faces_of(t)
    dims = sorted(f.dim for f in fs.values())
    assert dims == [0, 0, 0, 1, 1, 1, 2]


def test_intersection_of_adjacent_cells(slice_zero):
    m = intersect(slice_zero[0], slice_zero[1])
    assert m is not None and m.vertices == ((F(-1, 2),),)
    assert intersect(slice_zero[0], slice_zero[2]) is None


def test_cone_faces_contain_origin():
    c = cone_from_rays(2, [(1, 0), (1, 2)])
    fs = faces_of(c)
    assert all(f.contains((0, 0)) for f in fs.values())
    assert sorted(f.dim for f in fs.values()) == [0, 1, 1, 2]


def test_rank2_shifted_fan_complete():
    v = (F(1, 2), F(1, 3))
    rays = [(1, 0), (0, 1), (-1, -2)]
    cells = [
        polyhedron(2, [v], [rays[i], rays[(i + 1) % 3]]) for i in range(3)
    ]
    c = build_complex(cells)
    assert is_complete(c)
    rf = recession_fan(c)
    assert is_complete(rf)
    assert len(rf.cells_of_dim(1)) == 3


def test_fan_rejects_shifted_cells():
    with pytest.raises(TVarError):
        build_fan([polyhedron(1, [(1,)], [(1,)]), halfline(1, -1)])
