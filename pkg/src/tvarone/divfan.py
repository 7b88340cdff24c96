"""Divisorial fans of complete rational complexity-one torus varieties.

A divisorial fan couples one complete polyhedral complex per marked point
of the projective line with a common recession fan, plus an optional
upward-closed set of marked cones carrying user-supplied stabilizer
indices.  This module owns the index sets of invariant cycle classes,
lattice normal vectors, vertices with multiplicities, and star
restrictions, all computed exactly.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .exceptions import (
    DimensionMismatch,
    MarkedCone,
    NotAFacet,
    TVarError,
)
from .lattice import (
    IntVector,
    QuotientLattice,
    clear_denominators,
    primitive_vector,
    quotient_lattice,
)
from .polyhedra import (
    Cone,
    Fan,
    PolyComplex,
    Polyhedron,
    build_complex,
    build_fan,
    cone_from_rays,
    is_complete,
    linear_image_polyhedron,
    polyhedron,
    recession_fan,
)


@dataclass(frozen=True)
class WeightIndex:
    """Index of an invariant cycle class.

    kind "vertical": a cell of the slice at `point`; kind "horizontal": an
    unmarked cone of the recession fan; kind "contracted": a marked cone.
    For the two horizontal kinds `point` is empty.
    """

    kind: str
    point: str
    key: str

    @staticmethod
    def vertical(point: str, cell_key: str) -> "WeightIndex":
        return WeightIndex("vertical", point, cell_key)

    @staticmethod
    def horizontal(cone_key: str) -> "WeightIndex":
        return WeightIndex("horizontal", "", cone_key)

    @staticmethod
    def contracted(cone_key: str) -> "WeightIndex":
        return WeightIndex("contracted", "", cone_key)


@dataclass
class ValidationReport:
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations


class DivisorialFan:
    """Immutable divisorial-fan data with memoized derived structures."""

    def __init__(
        self,
        lattice_rank: int,
        marked_points: Sequence[str],
        slices: dict[str, PolyComplex],
        recession: Fan,
        marked_cones: Iterable[str] = (),
        stabilizer_index: dict[str, Fraction] | None = None,
    ):
        self.lattice_rank = lattice_rank
        self.marked_points = tuple(marked_points)
        self.slices = dict(slices)
        self.recession = recession
        self.marked_cones = frozenset(marked_cones)
        self.stabilizer_index = dict(stabilizer_index or {})
        self._lock = threading.Lock()
        self._cone_quot: dict[str, QuotientLattice] = {}
        self._cell_quot: dict[str, QuotientLattice] = {}
        self._rec_key: dict[tuple[str, str], str] = {}
        self._vstar: dict[tuple[str, str], VerticalStar] = {}
        self._hstar: dict[str, HorizontalStar] = {}

    # -- basic queries ---------------------------------------------------

    def slice_at(self, point: str) -> PolyComplex:
        return self.slices[point]

    def cone(self, key: str) -> Cone:
        return self.recession.cell(key)

    def cones_of_dim(self, d: int) -> tuple[str, ...]:
        return self.recession.cells_of_dim(d)

    def cell(self, point: str, key: str) -> Polyhedron:
        return self.slices[point].cell(key)

    def recession_key_of(self, point: str, cell_key: str) -> str:
        """Key (in the recession fan) of the cell's recession cone."""
        memo_key = (point, cell_key)
        with self._lock:
            if memo_key in self._rec_key:
                return self._rec_key[memo_key]
        cell = self.cell(point, cell_key)
        rc = cone_from_rays(self.lattice_rank, cell.rays) if cell.rays else cone_from_rays(
            self.lattice_rank, []
        )
        if rc.key not in self.recession.cells:
            raise TVarError(
                f"recession cone {rc.key} of cell {cell_key} is not in the recession fan"
            )
        with self._lock:
            self._rec_key[memo_key] = rc.key
        return rc.key

    def is_marked(self, cone_key: str) -> bool:
        return cone_key in self.marked_cones

    # -- quotient lattices -----------------------------------------------

    def cone_quotient(self, cone_key: str) -> QuotientLattice:
        """N(tau) = N / (N intersect span tau), memoized."""
        with self._lock:
            q = self._cone_quot.get(cone_key)
        if q is None:
            cone = self.cone(cone_key)
            q = quotient_lattice(self.lattice_rank, cone.rays)
            with self._lock:
                self._cone_quot[cone_key] = q
        return q

    def cell_quotient(self, point: str, cell_key: str) -> QuotientLattice:
        """Quotient of the homogenized lattice by the span of the cell's cone.

        The span does not depend on the height sign, so the quotient is
        memoized by cell key alone.
        """
        with self._lock:
            q = self._cell_quot.get(cell_key)
        if q is None:
            cell = self.cell(point, cell_key)
            gens = [clear_denominators(tuple(v) + (Fraction(1),)) for v in cell.vertices]
            gens += [tuple(r) + (0,) for r in cell.rays]
            q = quotient_lattice(self.lattice_rank + 1, gens)
            with self._lock:
                self._cell_quot[cell_key] = q
        return q

    # -- derived stars (populated lazily) ---------------------------------

    def vertical_star(self, point: str, cell_key: str) -> "VerticalStar":
        memo_key = (point, cell_key)
        with self._lock:
            st = self._vstar.get(memo_key)
        if st is None:
            st = _build_vertical_star(self, point, cell_key)
            with self._lock:
                self._vstar[memo_key] = st
        return st

    def horizontal_star(self, cone_key: str) -> "HorizontalStar":
        with self._lock:
            st = self._hstar.get(cone_key)
        if st is None:
            st = _build_horizontal_star(self, cone_key)
            with self._lock:
                self._hstar[cone_key] = st
        return st

    # -- canonical choices used by support-function restrictions ----------

    def maximal_cofaces(self, point: str, cell_key: str) -> tuple[str, ...]:
        sl = self.slices[point]
        return tuple(
            k for k in sl.maximal_keys if cell_key in sl.faces_of_cell(k)
        )

    def anchor_cell(self, point: str, cell_key: str) -> str:
        """Lexicographically least maximal cell having the given cell as face."""
        cofaces = self.maximal_cofaces(point, cell_key)
        if not cofaces:
            raise TVarError(f"cell {cell_key} has no maximal coface at {point}")
        return min(cofaces)

    def anchor_cell_for_cone(self, cone_key: str) -> tuple[str, str]:
        """(point, cell key) of the lexicographically least maximal cell of the
        first marked slice whose recession cone contains the given cone."""
        point = self.marked_points[0]
        sl = self.slices[point]
        candidates = [
            k
            for k in sl.maximal_keys
            if cone_key in self.recession.faces_of_cell(self.recession_key_of(point, k))
        ]
        if not candidates:
            raise TVarError(f"no maximal cell has recession containing {cone_key}")
        return point, min(candidates)


@dataclass
class VerticalStar:
    """Star fan of a slice cell in its homogenized quotient lattice."""

    quotient: QuotientLattice
    fan: Fan
    cell_to_cone: dict[str, str]


@dataclass
class HorizontalStar:
    """Divisorial fan of the orbit family attached to an unmarked cone."""

    quotient: QuotientLattice
    fan: "DivisorialFan"
    cell_maps: dict[str, dict[str, str]]
    cone_map: dict[str, str]


def _project_cone(q: QuotientLattice, gens: Iterable[IntVector]) -> Cone:
    images = [q.project(g) for g in gens]
    nonzero = [tuple(x) for x in images if any(x)]
    return cone_from_rays(q.rank, nonzero)


def _build_vertical_star(df: DivisorialFan, point: str, cell_key: str) -> VerticalStar:
    sl = df.slices[point]
    if cell_key not in sl.cells:
        raise TVarError(f"no cell {cell_key} in slice at {point}")
    q = df.cell_quotient(point, cell_key)
    cell_to_cone: dict[str, str] = {}
    cones: dict[str, Cone] = {}
    star_cells = sorted(k for k in sl.cells if cell_key in sl.faces_of_cell(k))
    for k in star_cells:
        g = sl.cell(k)
        gens = [clear_denominators(tuple(v) + (Fraction(1),)) for v in g.vertices]
        gens += [tuple(r) + (0,) for r in g.rays]
        img = _project_cone(q, gens)
        cell_to_cone[k] = img.key
        cones[img.key] = img
    maximal = [cones[cell_to_cone[k]] for k in star_cells if k in sl.maximal_keys]
    fan = build_fan(maximal)
    return VerticalStar(q, fan, cell_to_cone)


def _build_horizontal_star(df: DivisorialFan, cone_key: str) -> HorizontalStar:
    if df.is_marked(cone_key):
        raise MarkedCone(f"cone {cone_key} is marked; its orbit family is contracted")
    if cone_key not in df.recession.cells:
        raise TVarError(f"no cone {cone_key} in the recession fan")
    q = df.cone_quotient(cone_key)
    new_slices: dict[str, PolyComplex] = {}
    cell_maps: dict[str, dict[str, str]] = {}
    for point in df.marked_points:
        sl = df.slices[point]
        star_cells = sorted(
            k
            for k in sl.cells
            if cone_key in df.recession.faces_of_cell(df.recession_key_of(point, k))
        )
        images: dict[str, str] = {}
        max_imgs = []
        for k in star_cells:
            img = linear_image_polyhedron(sl.cell(k), q.projection, q.rank)
            images[k] = img.key
            if k in sl.maximal_keys:
                max_imgs.append(img)
        uniq = {p.key: p for p in max_imgs}
        new_slices[point] = build_complex(sorted(uniq.values(), key=lambda p: p.key))
        cell_maps[point] = images
    cone_map: dict[str, str] = {}
    star_cones = sorted(
        k for k in df.recession.cells if cone_key in df.recession.faces_of_cell(k)
    )
    max_cones = []
    for k in star_cones:
        img = _project_cone(q, df.cone(k).rays)
        cone_map[k] = img.key
        if k in df.recession.maximal_keys:
            max_cones.append(img)
    uniq = {c.key: c for c in max_cones}
    new_rec = build_fan(sorted(uniq.values(), key=lambda c: c.key))
    marked = sorted(cone_map[k] for k in star_cones if df.is_marked(k))
    stab = {
        cone_map[k]: df.stabilizer_index[k]
        for k in star_cones
        if k in df.stabilizer_index
    }
    sub = DivisorialFan(
        q.rank, df.marked_points, new_slices, new_rec, marked, stab
    )
    return HorizontalStar(q, sub, cell_maps, cone_map)


# -- validation ------------------------------------------------------------


def validate_fan(df: DivisorialFan, strict: bool = False) -> ValidationReport:
    """Check every divisorial-fan invariant; returns a report, never raises."""
    v: list[str] = []
    if len(df.marked_points) < 2:
        v.append("fewer than two marked points")
    if len(set(df.marked_points)) != len(df.marked_points):
        v.append("marked points are not distinct")
    if set(df.slices) != set(df.marked_points):
        v.append("slices do not match the marked points")
        return ValidationReport(v)
    if not is_complete(df.recession):
        v.append("recession fan is not complete")
    for point in df.marked_points:
        sl = df.slices[point]
        if sl.ambient_rank != df.lattice_rank:
            v.append(f"slice at {point} has wrong ambient rank")
            continue
        if not is_complete(sl):
            v.append(f"slice at {point} is not complete")
        try:
            rf = recession_fan(sl)
        except TVarError:
            v.append(f"recession cones of slice at {point} do not form a fan")
            continue
        if set(rf.cells) != set(df.recession.cells):
            v.append(f"slice at {point} has recession fan different from the given one")
        if strict and set(sl.cells) == set(df.recession.cells):
            v.append(f"slice at {point} equals the recession fan (strict mode)")
    all_cones = set(df.recession.cells)
    for key in sorted(df.marked_cones):
        if key not in all_cones:
            v.append(f"marked cone {key} is not in the recession fan")
    marked_in_fan = df.marked_cones & all_cones
    for key in sorted(marked_in_fan):
        for other in sorted(all_cones):
            if key in df.recession.faces_of_cell(other) and other not in df.marked_cones:
                v.append(
                    f"marked cones not closed upward: {key} is a face of unmarked {other}"
                )
    if df.marked_cones and df.marked_cones >= all_cones:
        v.append("every cone is marked")
    if df.marked_cones:
        for key in sorted(marked_in_fan):
            s = df.stabilizer_index.get(key)
            if s is None:
                v.append(f"marked cone {key} has no stabilizer index")
            elif not isinstance(s, (int, Fraction)) or s <= 0:
                v.append(f"marked cone {key} has non-positive stabilizer index")
    return ValidationReport(v)


# -- index sets ------------------------------------------------------------


def index_sets(
    df: DivisorialFan, k: int
) -> tuple[tuple[WeightIndex, ...], tuple[WeightIndex, ...], tuple[WeightIndex, ...]]:
    """The codimension-k cycle indices: (vertical, horizontal, contracted).

    Vertical entries run over cells of dimension n-k with unmarked
    recession, ordered by marked point then cell key; horizontal over
    unmarked cones of dimension n-k+1; contracted over marked cones of
    dimension n-k.
    """
    n = df.lattice_rank
    if not 0 <= k <= n + 1:
        raise ValueError(f"codimension {k} out of range 0..{n + 1}")
    vertical = []
    for point in df.marked_points:
        sl = df.slices[point]
        for key in sl.cells_of_dim(n - k):
            if not df.is_marked(df.recession_key_of(point, key)):
                vertical.append(WeightIndex.vertical(point, key))
    horizontal = [
        WeightIndex.horizontal(key)
        for key in df.cones_of_dim(n - k + 1)
        if not df.is_marked(key)
    ]
    contracted = [
        WeightIndex.contracted(key)
        for key in df.cones_of_dim(n - k)
        if df.is_marked(key)
    ]
    return tuple(vertical), tuple(horizontal), tuple(contracted)


def full_index(df: DivisorialFan, k: int) -> tuple[WeightIndex, ...]:
    v, r, t = index_sets(df, k)
    return v + r + t


# -- lattice-combinatorial gadgets ------------------------------------------


def vertex_and_multiplicity(
    df: DivisorialFan, point: str, cell_key: str
) -> tuple[tuple[Fraction, ...], int]:
    """Image vertex of a cell in N(rec cell) and its clearing multiple.

    Requires dim(cell) = dim(rec cell) so the image is a single point;
    raises DimensionMismatch otherwise.
    """
    cell = df.cell(point, cell_key)
    rec_key = df.recession_key_of(point, cell_key)
    rec = df.cone(rec_key)
    if cell.dim != rec.dim:
        raise DimensionMismatch(
            f"cell {cell_key} has dim {cell.dim} but its recession cone has dim {rec.dim}"
        )
    q = df.cone_quotient(rec_key)
    images = {q.project(v) for v in cell.vertices}
    if len(images) != 1:
        raise TVarError("cell does not project to a single point")
    v = next(iter(images))
    v = tuple(Fraction(x) for x in v)
    mu = 1
    for x in v:
        mu = mu * x.denominator // gcd(mu, x.denominator)
    return v, mu


def _primitive_image_direction(q: QuotientLattice, gens: Iterable[IntVector]) -> IntVector:
    """Primitive generator of the (one-sided) image ray of a cone one
    dimension above the quotiented one."""
    images = [q.project(g) for g in gens]
    nonzero = [tuple(int(x) for x in img) for img in images if any(img)]
    if not nonzero:
        raise NotAFacet("cone projects to zero; not one dimension above")
    prim = primitive_vector(nonzero[0])
    for img in nonzero:
        p2 = primitive_vector(img)
        if p2 != prim:
            raise NotAFacet("cone image is not a single ray")
    return prim


def horizontal_normal_vector(df: DivisorialFan, tau_key: str, sigma_key: str) -> IntVector:
    """Primitive image of sigma in N(tau); requires tau a facet of sigma."""
    tau = df.cone(tau_key)
    sigma = df.cone(sigma_key)
    if sigma.dim != tau.dim + 1 or tau_key not in df.recession.faces_of_cell(sigma_key):
        raise NotAFacet(f"{tau_key} is not a facet of {sigma_key}")
    q = df.cone_quotient(tau_key)
    return _primitive_image_direction(q, sigma.rays)


def vertical_normal_vector(
    df: DivisorialFan, point: str, f_key: str, g_key: str
) -> IntVector:
    """Primitive image of the homogenized coface in the homogenized quotient
    of the face; requires a one-step face relation inside the slice."""
    sl = df.slices[point]
    f = sl.cell(f_key)
    g = sl.cell(g_key)
    if g.dim != f.dim + 1 or f_key not in sl.faces_of_cell(g_key):
        raise NotAFacet(f"{f_key} is not a facet of {g_key} at {point}")
    q = df.cell_quotient(point, f_key)
    gens = [clear_denominators(tuple(v) + (Fraction(1),)) for v in g.vertices]
    gens += [tuple(r) + (0,) for r in g.rays]
    return _primitive_image_direction(q, gens)


# -- convenience constructors -----------------------------------------------


def divisorial_fan(
    lattice_rank: int,
    marked_points: Sequence[str],
    slice_cells: dict[str, Sequence[Polyhedron]],
    recession_cones: Sequence[Cone] | None = None,
    marked_cones: Iterable[str] = (),
    stabilizer_index: dict[str, Fraction] | None = None,
) -> DivisorialFan:
    """Assemble a DivisorialFan from maximal cells per marked point.

    When `recession_cones` is omitted the recession fan is derived from
    the first slice.
    """
    slices = {
        p: build_complex(list(cells)) for p, cells in slice_cells.items()
    }
    if recession_cones is None:
        first = slices[marked_points[0]]
        recession = recession_fan(first)
    else:
        recession = build_fan(list(recession_cones))
    return DivisorialFan(
        lattice_rank, marked_points, slices, recession, marked_cones, stabilizer_index
    )
