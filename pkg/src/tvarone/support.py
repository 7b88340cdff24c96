"""Cartier divisorial support functions on a divisorial fan.

A support function stores one integral affine datum (slope, translation)
per maximal cell of every marked slice and one integral slope per maximal
recession cone; the recession data is shared by all slices.  Validity
means continuity across cell walls plus agreement of cell slopes with the
recession slopes on unbounded directions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .divfan import DivisorialFan, ValidationReport, VerticalStar, vertex_and_multiplicity
from .exceptions import MarkedCone, TVarError
from .lattice import IntVector, lattice_reduce, row_space_basis, vec_dot
from .polyhedra import intersect


class SupportFunction:
    """Piecewise integral-affine data on the slices of a divisorial fan."""

    def __init__(
        self,
        df: DivisorialFan,
        cell_data: dict[str, dict[str, tuple[IntVector, int]]],
        recession_data: dict[str, IntVector],
    ):
        self.df = df
        self.cell_data = {
            p: {k: (tuple(int(x) for x in m), int(l)) for k, (m, l) in d.items()}
            for p, d in cell_data.items()
        }
        self.recession_data = {
            k: tuple(int(x) for x in m) for k, m in recession_data.items()
        }

    # -- data access -------------------------------------------------------

    def data(self, point: str, cell_key: str) -> tuple[IntVector, int]:
        """Affine datum on a cell; non-maximal cells borrow from their anchor
        (the least maximal coface), which agrees with every other choice on
        the cell itself."""
        d = self.cell_data[point]
        if cell_key in d:
            return d[cell_key]
        return d[self.df.anchor_cell(point, cell_key)]

    def value(self, point: str, x: Sequence) -> Fraction:
        """Evaluate at a rational point of the slice at `point`."""
        sl = self.df.slices[point]
        for key in sl.maximal_keys:
            if sl.cell(key).contains(x):
                m, l = self.cell_data[point][key]
                return Fraction(vec_dot(m, x)) + l
        raise TVarError(f"point {x} is outside the slice at {point}")

    def recession_slope(self, cone_key: str) -> IntVector:
        """Slope of the recession function on (any maximal cone over) a cone."""
        if cone_key in self.recession_data:
            return self.recession_data[cone_key]
        rec = self.df.recession
        for key in rec.maximal_keys:
            if cone_key in rec.faces_of_cell(key):
                return self.recession_data[key]
        raise TVarError(f"no recession datum covers cone {cone_key}")

    def recession_value(self, v: Sequence[int]) -> int:
        """Value of the recession function at a lattice direction."""
        rec = self.df.recession
        for key in rec.maximal_keys:
            if rec.cell(key).contains(v):
                return vec_dot(self.recession_data[key], v)
        raise TVarError(f"direction {v} not covered by the recession fan")

    # -- arithmetic ----------------------------------------------------------

    def _combine(self, other: "SupportFunction", sign: int) -> "SupportFunction":
        if other.df is not self.df:
            raise TVarError("support functions live on different fans")
        cells = {
            p: {
                k: (
                    tuple(a + sign * b for a, b in zip(m1, other.cell_data[p][k][0])),
                    l1 + sign * other.cell_data[p][k][1],
                )
                for k, (m1, l1) in d.items()
            }
            for p, d in self.cell_data.items()
        }
        rec = {
            k: tuple(a + sign * b for a, b in zip(m, other.recession_data[k]))
            for k, m in self.recession_data.items()
        }
        return SupportFunction(self.df, cells, rec)

    def __add__(self, other: "SupportFunction") -> "SupportFunction":
        return self._combine(other, 1)

    def __sub__(self, other: "SupportFunction") -> "SupportFunction":
        return self._combine(other, -1)

    def scaled(self, c: int) -> "SupportFunction":
        cells = {
            p: {k: (tuple(c * x for x in m), c * l) for k, (m, l) in d.items()}
            for p, d in self.cell_data.items()
        }
        rec = {k: tuple(c * x for x in m) for k, m in self.recession_data.items()}
        return SupportFunction(self.df, cells, rec)

    def __eq__(self, other):
        return (
            isinstance(other, SupportFunction)
            and self.df is other.df
            and self.cell_data == other.cell_data
            and self.recession_data == other.recession_data
        )

    def __hash__(self):
        return hash(
            (
                tuple(sorted((p, tuple(sorted(d.items()))) for p, d in self.cell_data.items())),
                tuple(sorted(self.recession_data.items())),
            )
        )


def validate_support_function(df: DivisorialFan, h: SupportFunction) -> ValidationReport:
    """Continuity, recession consistency and domain checks; empty report
    exactly when `h` is a divisorial support function on `df`."""
    v: list[str] = []
    if set(h.cell_data) != set(df.marked_points):
        v.append("cell data does not cover exactly the marked points")
        return ValidationReport(v)
    for point in df.marked_points:
        sl = df.slices[point]
        have = set(h.cell_data[point])
        want = set(sl.maximal_keys)
        if have != want:
            v.append(f"cell data at {point} does not match the maximal cells")
            return ValidationReport(v)
    if set(h.recession_data) != set(df.recession.maximal_keys):
        v.append("recession data does not match the maximal recession cones")
        return ValidationReport(v)
    # Continuity across every pair of meeting maximal cells.
    for point in df.marked_points:
        sl = df.slices[point]
        keys = sl.maximal_keys
        for i, k1 in enumerate(keys):
            m1, l1 = h.cell_data[point][k1]
            for k2 in keys[i + 1 :]:
                m2, l2 = h.cell_data[point][k2]
                meet = intersect(sl.cell(k1), sl.cell(k2))
                if meet is None:
                    continue
                dm = tuple(a - b for a, b in zip(m1, m2))
                dl = l1 - l2
                for vx in meet.vertices:
                    if vec_dot(dm, vx) + dl != 0:
                        v.append(
                            f"discontinuity at {point}: cells {k1} and {k2} disagree at vertex {vx}"
                        )
                for r in meet.rays:
                    if vec_dot(dm, r) != 0:
                        v.append(
                            f"discontinuity at {point}: cells {k1} and {k2} disagree on ray {r}"
                        )
    # Recession function continuity across walls of the recession fan.
    rec = df.recession
    rkeys = rec.maximal_keys
    for i, k1 in enumerate(rkeys):
        for k2 in rkeys[i + 1 :]:
            meet = intersect(rec.cell(k1), rec.cell(k2))
            if meet is None:
                continue
            dm = tuple(a - b for a, b in zip(h.recession_data[k1], h.recession_data[k2]))
            for r in meet.rays:
                if vec_dot(dm, r) != 0:
                    v.append(f"recession slopes of {k1} and {k2} disagree on ray {r}")
    # Cell slopes restrict to the recession slopes on unbounded directions.
    for point in df.marked_points:
        sl = df.slices[point]
        for key in sl.maximal_keys:
            m, _ = h.cell_data[point][key]
            rec_key = df.recession_key_of(point, key)
            for max_cone in rkeys:
                if rec_key not in rec.faces_of_cell(max_cone):
                    continue
                mbar = h.recession_data[max_cone]
                for r in df.cone(rec_key).rays:
                    if vec_dot(m, r) != vec_dot(mbar, r):
                        v.append(
                            f"cell {key} at {point}: slope disagrees with recession on ray {r}"
                        )
    return ValidationReport(v)


def recession_of(h: SupportFunction) -> dict[str, IntVector]:
    """Slopes of the recession function, one per maximal recession cone."""
    return dict(h.recession_data)


def principal_support_function(
    df: DivisorialFan, u: Sequence[int], divisor: dict[str, int] | None = None
) -> SupportFunction:
    """The function with slope `u` everywhere and per-slice translation given
    by the projective-line divisor `divisor` (supported on marked points)."""
    divisor = divisor or {}
    bad = [p for p, c in divisor.items() if p not in df.marked_points and c != 0]
    if bad:
        raise TVarError(f"divisor supported outside the marked points: {bad}")
    u = tuple(int(x) for x in u)
    cells = {
        p: {k: (u, int(divisor.get(p, 0))) for k in df.slices[p].maximal_keys}
        for p in df.marked_points
    }
    rec = {k: u for k in df.recession.maximal_keys}
    return SupportFunction(df, cells, rec)


def principal_decomposition(
    df: DivisorialFan, h: SupportFunction
) -> tuple[IntVector, dict[str, int]] | None:
    """Recover (u, degree-zero divisor) when `h` is principal, else None."""
    slopes = {m for d in h.cell_data.values() for m, _ in d.values()}
    slopes |= set(h.recession_data.values())
    if len(slopes) != 1:
        return None
    u = next(iter(slopes))
    coeffs = {}
    for p in df.marked_points:
        ells = {l for _, l in h.cell_data[p].values()}
        if len(ells) != 1:
            return None
        coeffs[p] = next(iter(ells))
    if sum(coeffs.values()) != 0:
        return None
    return u, coeffs


def _reduced_cone_representative(df: DivisorialFan, h: SupportFunction, cone_key: str) -> IntVector:
    """Canonical lattice representative of the recession slope of `h` on a cone.

    Takes the slope of the anchor cell and reduces it modulo the lattice of
    functionals vanishing on the cone, so a slope that already vanishes
    there reduces to zero.
    """
    point, anchor = df.anchor_cell_for_cone(cone_key)
    m_anchor, _ = h.cell_data[point][anchor]
    q = df.cone_quotient(cone_key)
    basis = row_space_basis(q.dual_basis) if q.dual_basis else ()
    return lattice_reduce(m_anchor, basis)


def restrict_horizontal(
    df: DivisorialFan, h: SupportFunction, cone_key: str, normalizer: IntVector | None = None
) -> SupportFunction:
    """The induced support function on the orbit-family fan of an unmarked cone.

    The recession slope on the cone is removed by subtracting a lattice
    representative (the canonical reduced one unless `normalizer` overrides
    it); the remaining data descends to the quotient lattice.
    """
    if df.is_marked(cone_key):
        raise MarkedCone(f"cone {cone_key} is marked")
    star = df.horizontal_star(cone_key)
    q = star.quotient
    m_tau = (
        tuple(int(x) for x in normalizer)
        if normalizer is not None
        else _reduced_cone_representative(df, h, cone_key)
    )
    cells: dict[str, dict[str, tuple[IntVector, int]]] = {}
    for point in df.marked_points:
        out: dict[str, tuple[IntVector, int]] = {}
        sub_slice = star.fan.slices[point]
        for src, img in star.cell_maps[point].items():
            if img not in sub_slice.maximal_keys or src not in h.cell_data[point]:
                continue
            m, l = h.cell_data[point][src]
            diff = tuple(a - b for a, b in zip(m, m_tau))
            coords = q.functional_coords(diff)
            if img in out and out[img] != (coords, l):
                raise TVarError("inconsistent descent of support function data")
            out[img] = (coords, l)
        cells[point] = out
    rec_out: dict[str, IntVector] = {}
    for src, img in star.cone_map.items():
        if img not in star.fan.recession.maximal_keys or src not in h.recession_data:
            continue
        diff = tuple(a - b for a, b in zip(h.recession_data[src], m_tau))
        coords = q.functional_coords(diff)
        if img in rec_out and rec_out[img] != coords:
            raise TVarError("inconsistent descent of recession data")
        rec_out[img] = coords
    return SupportFunction(star.fan, cells, rec_out)


@dataclass
class VirtualSupportFunction:
    """Cone-indexed linear functionals on a vertical star fan.

    `functionals` maps each cone of the star fan to its covector in the
    quotient-dual coordinates; functionals of nested cones agree on the
    smaller cone.
    """

    star: VerticalStar
    functionals: dict[str, IntVector]

    def value(self, cone_key: str, v: Sequence) -> Fraction:
        return vec_dot(self.functionals[cone_key], v)

    def value_on_cell(self, cell_key: str, v: Sequence) -> Fraction:
        return self.value(self.star.cell_to_cone[cell_key], v)


def restrict_vertical(
    df: DivisorialFan,
    h: SupportFunction,
    point: str,
    cell_key: str,
    normalizer: tuple[IntVector, int] | None = None,
) -> VirtualSupportFunction:
    """Virtual support function induced on the star fan of a slice cell.

    Each cell above the given one contributes the descent of the difference
    between its affine datum and the normalizer (the anchor cell's datum by
    default).  For a valid `h` every difference descends to an integral
    functional on the quotient.
    """
    star = df.vertical_star(point, cell_key)
    q = star.quotient
    base = normalizer if normalizer is not None else h.data(point, cell_key)
    m0, l0 = base
    functionals: dict[str, IntVector] = {}
    for src, cone_key_img in sorted(star.cell_to_cone.items()):
        m, l = h.data(point, src)
        diff = tuple(a - b for a, b in zip(m, m0)) + (l - l0,)
        functionals[cone_key_img] = q.functional_coords(diff)
    return VirtualSupportFunction(star, functionals)


@dataclass
class WeilExpansion:
    """Integer coefficients of the invariant boundary expansion of a divisor."""

    horizontal: dict[str, int]
    vertical: dict[tuple[str, str], int]

    def nonzero(self) -> dict:
        out = {k: v for k, v in self.horizontal.items() if v}
        out.update({k: v for k, v in self.vertical.items() if v})
        return out

    def __add__(self, other: "WeilExpansion") -> "WeilExpansion":
        if set(self.horizontal) != set(other.horizontal) or set(self.vertical) != set(
            other.vertical
        ):
            raise TVarError("expansions have different index sets")
        return WeilExpansion(
            {k: v + other.horizontal[k] for k, v in self.horizontal.items()},
            {k: v + other.vertical[k] for k, v in self.vertical.items()},
        )


def weil_expansion(df: DivisorialFan, h: SupportFunction) -> WeilExpansion:
    """Boundary-divisor coefficients of `h`: minus the recession value on each
    unmarked ray, and minus (multiplicity times value) at each slice vertex.
    Rays of marked cones are omitted."""
    horizontal: dict[str, int] = {}
    for key in df.cones_of_dim(1):
        if df.is_marked(key):
            continue
        ray = df.cone(key).rays[0]
        horizontal[key] = -vec_dot(h.recession_slope(key), ray)
    vertical: dict[tuple[str, str], int] = {}
    for point in df.marked_points:
        sl = df.slices[point]
        for key in sl.cells_of_dim(0):
            vtx = sl.cell(key).vertices[0]
            _, mu = vertex_and_multiplicity(df, point, key)
            val = h.value(point, vtx)
            coeff = -mu * val
            if coeff.denominator != 1:
                raise TVarError("non-integral vertical coefficient")
            vertical[(point, key)] = int(coeff)
    return WeilExpansion(horizontal, vertical)
