"""Exact rational polyhedra, cones, complexes and fans at desk scale.

Cells are entered by generators (rational vertices plus primitive integer
rays); facet descriptions are derived by brute-force enumeration, which is
entirely adequate for ambient rank <= 4.  All polyhedra handled here are
pointed: the vertex list of a nonempty polyhedron is never empty, so cones
carry their apex as the single vertex and no cell contains a line.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .exceptions import IntersectionNotFace, TVarError
from .lattice import (
    IntVector,
    RatVector,
    clear_denominators,
    primitive_vector,
    rational_nullspace,
    rational_rank,
    rational_solve,
    vec_dot,
)


def _fracvec(v: Sequence) -> RatVector:
    return tuple(Fraction(x) for x in v)


def format_vector(v: Sequence) -> str:
    return "(" + ",".join(str(Fraction(x)) for x in v) + ")"


class Polyhedron:
    """A pointed rational polyhedron conv(vertices) + cone(rays).

    Instances are immutable and canonical: vertices/rays are the minimal
    generator sets, sorted, with rays primitive.  `inequalities` holds one
    (normal, offset) pair per facet meaning <normal, x> >= offset, and
    `equations` cuts out the affine hull.
    """

    __slots__ = (
        "ambient_rank",
        "vertices",
        "rays",
        "dim",
        "inequalities",
        "equations",
        "key",
    )

    def __init__(self, ambient_rank, vertices, rays, dim, inequalities, equations):
        self.ambient_rank = ambient_rank
        self.vertices = vertices
        self.rays = rays
        self.dim = dim
        self.inequalities = inequalities
        self.equations = equations
        self.key = (
            "["
            + ",".join(format_vector(v) for v in vertices)
            + ";"
            + ",".join(format_vector(r) for r in rays)
            + "]"
        )

    def __eq__(self, other):
        return isinstance(other, Polyhedron) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Polyhedron{self.key}"

    def contains(self, point: Sequence) -> bool:
        p = _fracvec(point)
        return all(vec_dot(a, p) == b for a, b in self.equations) and all(
            vec_dot(a, p) >= b for a, b in self.inequalities
        )

    def is_cone(self) -> bool:
        return self.vertices == ((Fraction(0),) * self.ambient_rank,)


Cone = Polyhedron


def _cone_facets(gens: Sequence[RatVector], rank: int):
    """Facets and span equations of cone(gens) in Q^rank.

    Returns (facets, equations) where each facet is (primitive inner
    normal, tight generator indices) and equations are primitive normals
    of the linear span, sign-canonicalized.
    """
    eq_basis = rational_nullspace(gens) if gens else tuple(
        tuple(Fraction(1 if i == j else 0) for j in range(rank)) for i in range(rank)
    )
    equations = []
    for e in eq_basis:
        n = clear_denominators(e)
        if next(x for x in n if x != 0) < 0:
            n = tuple(-x for x in n)
        equations.append(n)
    equations.sort()
    dim = rank - len(equations)
    facets = []
    seen = set()
    if dim > 0:
        for subset in combinations(range(len(gens)), dim - 1):
            rows = [gens[i] for i in subset] + [_fracvec(e) for e in equations]
            ns = rational_nullspace(rows)
            if len(ns) != 1:
                continue
            a = clear_denominators(ns[0])
            values = [vec_dot(a, g) for g in gens]
            if all(v >= 0 for v in values) and any(v > 0 for v in values):
                pass
            elif all(v <= 0 for v in values) and any(v < 0 for v in values):
                a = tuple(-x for x in a)
                values = [-v for v in values]
            else:
                continue
            if a in seen:
                continue
            seen.add(a)
            tight = tuple(i for i, v in enumerate(values) if v == 0)
            facets.append((a, tight))
    facets.sort()
    return tuple(facets), tuple(equations)


def polyhedron(ambient_rank: int, points: Iterable[Sequence], rays: Iterable[Sequence[int]] = ()) -> Polyhedron:
    """Build the canonical polyhedron conv(points) + cone(rays).

    Redundant generators are allowed and pruned.  Raises TVarError when no
    point is given (the empty set is not modeled as a cell).
    """
    pts = sorted({_fracvec(p) for p in points})
    rys = sorted({primitive_vector(r) for r in rays})
    if not pts:
        raise TVarError("a polyhedron needs at least one point")
    if any(len(p) != ambient_rank for p in pts) or any(len(r) != ambient_rank for r in rys):
        raise TVarError("generator has wrong ambient rank")
    # Homogenize: points at height 1, rays at height 0.
    hgens = [p + (Fraction(1),) for p in pts] + [_fracvec(r) + (Fraction(0),) for r in rys]
    hfacets, hequations = _cone_facets(hgens, ambient_rank + 1)
    inequalities = []
    for a, tight in hfacets:
        if all(i >= len(pts) for i in tight):
            continue  # facet at infinity or the apex: no height-1 generator
        normal, offset = a[:-1], a[-1]
        if all(x == 0 for x in normal):
            continue  # the height facet itself
        inequalities.append((normal, -offset))
    equations = []
    for a in hequations:
        normal, offset = a[:-1], a[-1]
        if all(x == 0 for x in normal):
            continue
        equations.append((normal, -offset))
    inequalities.sort()
    equations.sort()
    eqn = [a for a, _ in equations]
    # Minimal V-representation via tightness rank tests.
    vertices = []
    for p in pts:
        tightn = list(eqn)
        for a, b in inequalities:
            if vec_dot(a, p) == b:
                tightn.append(a)
        if rational_rank(tightn) == ambient_rank:
            vertices.append(p)
    extreme = []
    for r in rys:
        tightn = list(eqn)
        for a, _ in inequalities:
            if vec_dot(a, r) == 0:
                tightn.append(a)
        if rational_rank(tightn) == ambient_rank - 1:
            extreme.append(r)
    dim = ambient_rank - len(equations)
    return Polyhedron(
        ambient_rank,
        tuple(vertices),
        tuple(extreme),
        dim,
        tuple(inequalities),
        tuple(equations),
    )


def cone_from_rays(ambient_rank: int, rays: Iterable[Sequence[int]]) -> Cone:
    """The polyhedral cone spanned by `rays`, with its apex as sole vertex.

    Rejects non-pointed input (a pair of opposite directions).
    """
    origin = (0,) * ambient_rank
    c = polyhedron(ambient_rank, [origin], rays)
    if not c.is_cone():
        raise TVarError("rays span a non-pointed cone")
    return c


def recession_cone(p: Polyhedron) -> Cone:
    """Cone of unbounded directions of `p`."""
    return cone_from_rays(p.ambient_rank, p.rays)


def homogenize(f: Polyhedron, height_sign: int) -> Cone:
    """The cone over `f` placed at height `height_sign` in rank n+1.

    Vertices (v, s) are cleared to primitive integer generators; rays sit
    at height 0.
    """
    if height_sign not in (1, -1):
        raise TVarError("height_sign must be +1 or -1")
    gens = [clear_denominators(tuple(v) + (Fraction(height_sign),)) for v in f.vertices]
    gens += [tuple(r) + (0,) for r in f.rays]
    return cone_from_rays(f.ambient_rank + 1, gens)


def polyhedron_from_hrep(
    ambient_rank: int,
    inequalities: Sequence[tuple[IntVector, object]],
    equations: Sequence[tuple[IntVector, object]],
) -> Polyhedron | None:
    """Pointed polyhedron cut out by <a,x> >= b and <a,x> = b, or None if empty."""
    rows = [(a, b, True) for a, b in equations] + [(a, b, False) for a, b in inequalities]

    def feasible(x):
        for a, b, is_eq in rows:
            val = vec_dot(a, x)
            if is_eq and val != b:
                return False
            if not is_eq and val < b:
                return False
        return True

    verts = set()
    normals = [(a, b) for a, b, _ in rows]
    for subset in combinations(range(len(normals)), ambient_rank):
        mat = [normals[i][0] for i in subset]
        rhs = [normals[i][1] for i in subset]
        if rational_rank(mat) != ambient_rank:
            continue
        x = rational_solve(mat, rhs)
        if x is not None and feasible(x):
            verts.add(x)
    if not verts and ambient_rank > 0:
        return None
    if ambient_rank == 0:
        if not feasible(()):
            return None
        verts = {()}
    ray_dirs = set()

    def ray_ok(v):
        for a, _, is_eq in rows:
            val = vec_dot(a, v)
            if is_eq and val != 0:
                return False
            if not is_eq and val < 0:
                return False
        return True

    if ambient_rank >= 1:
        mats = [a for a, _, _ in rows]
        for subset in combinations(range(len(mats)), ambient_rank - 1):
            rowsub = [mats[i] for i in subset]
            ns = rational_nullspace(rowsub) if rowsub else rational_nullspace([[0] * ambient_rank])
            if len(ns) != 1:
                continue
            d = clear_denominators(ns[0])
            for cand in (d, tuple(-x for x in d)):
                if ray_ok(cand):
                    ray_dirs.add(cand)
    return polyhedron(ambient_rank, verts, ray_dirs)


def intersect(p: Polyhedron, q: Polyhedron) -> Polyhedron | None:
    if p.ambient_rank != q.ambient_rank:
        raise TVarError("ambient ranks differ")
    return polyhedron_from_hrep(
        p.ambient_rank,
        p.inequalities + q.inequalities,
        p.equations + q.equations,
    )


def faces_of(p: Polyhedron) -> dict[str, Polyhedron]:
    """All nonempty faces of `p`, keyed by canonical id; includes `p` itself."""
    seen: dict[str, Polyhedron] = {}
    stack = [p]
    while stack:
        f = stack.pop()
        if f.key in seen:
            continue
        seen[f.key] = f
        for a, b in f.inequalities:
            vs = [v for v in f.vertices if vec_dot(a, v) == b]
            rs = [r for r in f.rays if vec_dot(a, r) == 0]
            if vs:
                stack.append(polyhedron(f.ambient_rank, vs, rs))
    return seen


class PolyComplex:
    """A polyhedral complex: cells closed under faces, glued along common faces.

    `cells` maps canonical key -> Polyhedron for every face; the complex
    remembers which cells were maximal input cells.  Instances are
    immutable and all queries are pure.
    """

    __slots__ = ("ambient_rank", "cells", "maximal_keys", "_faces", "_by_dim")

    def __init__(self, ambient_rank, cells, maximal_keys, faces, by_dim):
        self.ambient_rank = ambient_rank
        self.cells = cells
        self.maximal_keys = maximal_keys
        self._faces = faces
        self._by_dim = by_dim

    def cell(self, key: str) -> Polyhedron:
        return self.cells[key]

    def maximal_cells(self) -> tuple[Polyhedron, ...]:
        return tuple(self.cells[k] for k in self.maximal_keys)

    def cells_of_dim(self, d: int) -> tuple[str, ...]:
        return self._by_dim.get(d, ())

    def faces_of_cell(self, key: str) -> frozenset[str]:
        """Keys of all faces of the given cell (including itself)."""
        return self._faces[key]

    def is_face(self, fkey: str, gkey: str) -> bool:
        return fkey in self._faces[gkey]

    def cofaces_of(self, key: str, dim: int | None = None) -> tuple[str, ...]:
        """Cells having `key` as a face, optionally filtered by dimension."""
        out = [
            k
            for k in sorted(self.cells)
            if key in self._faces[k]
            and (dim is None or self.cells[k].dim == dim)
        ]
        return tuple(out)

    def face_relation(self) -> tuple[tuple[str, str], ...]:
        """All strict (face, coface) pairs, canonically ordered."""
        pairs = []
        for g in sorted(self.cells):
            for f in sorted(self._faces[g]):
                if f != g:
                    pairs.append((f, g))
        return tuple(pairs)

    def all_cones(self) -> bool:
        return all(c.is_cone() for c in self.cells.values())

    def __eq__(self, other):
        return (
            isinstance(other, PolyComplex)
            and self.ambient_rank == other.ambient_rank
            and set(self.cells) == set(other.cells)
            and set(self.maximal_keys) == set(other.maximal_keys)
        )

    def __hash__(self):
        return hash((self.ambient_rank, tuple(sorted(self.cells))))


Fan = PolyComplex


def build_complex(max_cells: Sequence[Polyhedron]) -> PolyComplex:
    """Assemble a complex from its maximal cells, enumerating every face.

    Raises IntersectionNotFace when two maximal cells overlap improperly
    (their intersection is not a common face) and TVarError on duplicate
    or nested maximal cells.
    """
    if not max_cells:
        raise TVarError("a complex needs at least one maximal cell")
    rank = max_cells[0].ambient_rank
    if any(c.ambient_rank != rank for c in max_cells):
        raise TVarError("maximal cells have mixed ambient ranks")
    keys = [c.key for c in max_cells]
    if len(set(keys)) != len(keys):
        raise TVarError("duplicate maximal cell")
    face_sets: dict[str, dict[str, Polyhedron]] = {c.key: faces_of(c) for c in max_cells}
    for a, b in combinations(max_cells, 2):
        meet = intersect(a, b)
        if meet is None:
            continue
        if meet.key == a.key or meet.key == b.key:
            raise TVarError("maximal cell contained in another")
        if meet.key not in face_sets[a.key] or meet.key not in face_sets[b.key]:
            raise IntersectionNotFace(
                f"cells {a.key} and {b.key} meet in {meet.key}, not a common face"
            )
    cells: dict[str, Polyhedron] = {}
    faces: dict[str, frozenset[str]] = {}
    for c in max_cells:
        for k, f in face_sets[c.key].items():
            cells[k] = f
    for k, f in list(cells.items()):
        if k not in faces:
            faces[k] = frozenset(faces_of(f))
    by_dim: dict[int, tuple[str, ...]] = {}
    for d in range(rank + 1):
        ks = sorted(k for k, c in cells.items() if c.dim == d)
        if ks:
            by_dim[d] = tuple(ks)
    return PolyComplex(rank, cells, tuple(sorted(keys)), faces, by_dim)


def build_fan(max_cones: Sequence[Cone]) -> Fan:
    """Assemble a fan from maximal cones (a complex of cones with apex 0)."""
    fan = build_complex(max_cones)
    if not fan.all_cones():
        raise TVarError("fan cells must be cones with apex at the origin")
    return fan


def recession_fan(complex_: PolyComplex) -> Fan:
    """Fan of recession cones of the maximal cells.

    Raises IntersectionNotFace if the recession cones do not form a fan.
    """
    cones: dict[str, Cone] = {}
    for c in complex_.maximal_cells():
        rc = recession_cone(c)
        cones[rc.key] = rc
    # Drop cones contained in others so build_complex sees true maximals.
    maximal = []
    for k, c in sorted(cones.items()):
        if not any(
            k2 != k and intersect(c, c2) is not None and intersect(c, c2).key == k
            for k2, c2 in cones.items()
        ):
            maximal.append(c)
    return build_fan(maximal)


def is_complete(c: PolyComplex) -> bool:
    """Completeness test: full-dim maximal cells, every ridge in exactly two
    of them, and the same criterion for the recession fan."""
    n = c.ambient_rank
    if n == 0:
        return bool(c.cells)
    maximal = c.maximal_cells()
    if any(cell.dim != n for cell in maximal):
        return False
    for key in c.cells_of_dim(n - 1):
        count = sum(1 for m in maximal if key in c.faces_of_cell(m.key))
        if count != 2:
            return False
    if c.all_cones():
        return True
    try:
        rf = recession_fan(c)
    except TVarError:
        return False
    return is_complete(rf)


def linear_image_polyhedron(p: Polyhedron, rows: Sequence[Sequence[int]], target_rank: int) -> Polyhedron:
    """Image of `p` under the integer linear map given by matrix `rows`."""
    pts = [tuple(vec_dot(r, v) for r in rows) for v in p.vertices]
    if target_rank == 0:
        return polyhedron(0, [()])
    rys = []
    for ray in p.rays:
        img = tuple(vec_dot(r, ray) for r in rows)
        if any(img):
            rys.append(img)
    return polyhedron(target_rank, pts, rys)
