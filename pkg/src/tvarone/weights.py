"""Generalized Minkowski weights: balancing conditions, bases, restrictions.

A weight of codimension k assigns an integer to every codimension-k
invariant cycle index.  The balancing conditions are linear; this module
exposes them as explicit coefficient maps so that checking a weight,
printing residual arithmetic and computing the solution lattice all run
off one deterministic enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .divfan import (
    DivisorialFan,
    WeightIndex,
    full_index,
    horizontal_normal_vector,
    index_sets,
    vertex_and_multiplicity,
    vertical_normal_vector,
)
from .exceptions import (
    DimensionMismatch,
    MarkedCone,
    MissingStabilizer,
    TVarError,
    UnsupportedMarking,
)
from .lattice import as_matrix, integer_kernel, vec_dot


class Weight:
    """Integer-valued function on the codimension-k cycle indices."""

    def __init__(self, df: DivisorialFan, codim: int, values: dict[WeightIndex, int]):
        domain = full_index(df, codim)
        if set(values) != set(domain):
            missing = set(domain) - set(values)
            extra = set(values) - set(domain)
            raise TVarError(
                f"weight domain mismatch (missing {len(missing)}, extra {len(extra)})"
            )
        self.df = df
        self.codim = codim
        self.values = {idx: int(values[idx]) for idx in domain}

    def value(self, idx: WeightIndex) -> int:
        return self.values[idx]

    def as_vector(self) -> tuple[int, ...]:
        return tuple(self.values[idx] for idx in full_index(self.df, self.codim))

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values.values())

    def _combine(self, other: "Weight", sign: int) -> "Weight":
        if other.df is not self.df or other.codim != self.codim:
            raise TVarError("weights are not comparable")
        return Weight(
            self.df,
            self.codim,
            {idx: v + sign * other.values[idx] for idx, v in self.values.items()},
        )

    def __add__(self, other: "Weight") -> "Weight":
        return self._combine(other, 1)

    def __sub__(self, other: "Weight") -> "Weight":
        return self._combine(other, -1)

    def scaled(self, c: int) -> "Weight":
        return Weight(self.df, self.codim, {i: c * v for i, v in self.values.items()})

    def __eq__(self, other):
        return (
            isinstance(other, Weight)
            and self.df is other.df
            and self.codim == other.codim
            and self.values == other.values
        )

    def __hash__(self):
        return hash((self.codim, tuple(sorted((str(k), v) for k, v in self.values.items()))))


@dataclass
class BalancingCondition:
    """One linear balancing condition: sum of coefficient * weight value."""

    condition: str  # "1", "2.1", "2.2" or "3"
    location: str
    coefficients: dict[WeightIndex, Fraction]

    def residual(self, c: Weight) -> Fraction:
        return sum(
            (coeff * c.values[idx] for idx, coeff in self.coefficients.items()),
            Fraction(0),
        )


@dataclass
class BalancingViolation:
    condition: str
    location: str
    residual: Fraction


@dataclass
class BalancingReport:
    violations: list[BalancingViolation]

    @property
    def ok(self) -> bool:
        return not self.violations


def _marked_neighbor_coefficient(
    df: DivisorialFan, point: str, g_key: str
) -> tuple[WeightIndex, Fraction]:
    rec_key = df.recession_key_of(point, g_key)
    cell = df.cell(point, g_key)
    rec = df.cone(rec_key)
    if rec.dim != cell.dim:
        raise UnsupportedMarking(
            f"cell {g_key} at {point} has marked recession cone of smaller dimension; "
            "its contracted class has no supported expansion"
        )
    s = df.stabilizer_index.get(rec_key)
    if s is None:
        raise MissingStabilizer(f"no stabilizer index for marked cone {rec_key}")
    _, mu = vertex_and_multiplicity(df, point, g_key)
    return WeightIndex.contracted(rec_key), Fraction(s, mu)


def balancing_conditions(df: DivisorialFan, k: int) -> tuple[BalancingCondition, ...]:
    """All balancing conditions constraining codimension-k weights, in
    canonical order.  Raises MissingStabilizer / UnsupportedMarking when the
    marked data needed by a condition is absent or out of scope."""
    n = df.lattice_rank
    if k + 1 > n + 1:
        return ()
    out: list[BalancingCondition] = []
    verts1, rays1, marked1 = index_sets(df, k + 1)
    # Condition 1: relations on the star of a one-lower vertical cell.
    for idx in verts1:
        point, f_key = idx.point, idx.key
        sl = df.slices[point]
        q = df.cell_quotient(point, f_key)
        neighbors = [
            g
            for g in sl.cells_of_dim(n - k)
            if f_key in sl.faces_of_cell(g) and g != f_key
        ]
        terms: list[tuple[WeightIndex, Fraction, tuple[int, ...]]] = []
        for g_key in neighbors:
            v = vertical_normal_vector(df, point, f_key, g_key)
            rec_key = df.recession_key_of(point, g_key)
            if df.is_marked(rec_key):
                target, coeff = _marked_neighbor_coefficient(df, point, g_key)
            else:
                target, coeff = WeightIndex.vertical(point, g_key), Fraction(1)
            terms.append((target, coeff, v))
        for i in range(q.rank):
            coeffs: dict[WeightIndex, Fraction] = {}
            for target, coeff, v in terms:
                coeffs[target] = coeffs.get(target, Fraction(0)) + coeff * v[i]
            coeffs = {t: c for t, c in coeffs.items() if c != 0}
            out.append(
                BalancingCondition("1", f"cell {f_key} at {point}, basis {i}", coeffs)
            )
    # Condition 2: relations on the orbit family of a one-lower unmarked cone.
    verts_k, rays_k, _ = index_sets(df, k) if k <= n + 1 else ((), (), ())
    for idx in rays1:
        tau_key = idx.key
        q = df.cone_quotient(tau_key)
        fiber_items = [
            w for w in verts_k if df.recession_key_of(w.point, w.key) == tau_key
        ]
        coface_items = [
            w
            for w in rays_k
            if tau_key in df.recession.faces_of_cell(w.key) and w.key != tau_key
        ]
        data = []
        for w in fiber_items:
            v, mu = vertex_and_multiplicity(df, w.point, w.key)
            data.append((w, mu, v))
        for i in range(q.rank):
            coeffs = {}
            for w, mu, v in data:
                c = Fraction(mu) * v[i]
                if c != 0:
                    coeffs[w] = coeffs.get(w, Fraction(0)) + c
            for w in coface_items:
                nv = horizontal_normal_vector(df, tau_key, w.key)
                if nv[i] != 0:
                    coeffs[w] = coeffs.get(w, Fraction(0)) + nv[i]
            out.append(
                BalancingCondition("2.1", f"cone {tau_key}, basis {i}", coeffs)
            )
        base = df.marked_points[0]
        base_terms = {
            w: Fraction(mu) for (w, mu, _) in data if w.point == base
        }
        for point in df.marked_points[1:]:
            coeffs = {w: Fraction(mu) for (w, mu, _) in data if w.point == point}
            for w, c in base_terms.items():
                coeffs[w] = coeffs.get(w, Fraction(0)) - c
            coeffs = {t: c for t, c in coeffs.items() if c != 0}
            out.append(
                BalancingCondition(
                    "2.2", f"cone {tau_key}: {point} vs {base}", coeffs
                )
            )
    # Condition 3: relations among contracted classes around a marked cone.
    for idx in marked1:
        tau_key = idx.key
        q = df.cone_quotient(tau_key)
        cofaces = [
            key
            for key in df.cones_of_dim(n - k)
            if tau_key in df.recession.faces_of_cell(key) and key != tau_key
        ]
        for key in cofaces:
            if not df.is_marked(key):
                raise TVarError(
                    f"marked cone {tau_key} has unmarked coface {key}; marking not upward closed"
                )
        for i in range(q.rank):
            coeffs = {}
            for key in cofaces:
                nv = horizontal_normal_vector(df, tau_key, key)
                if nv[i] != 0:
                    coeffs[WeightIndex.contracted(key)] = Fraction(nv[i])
            out.append(
                BalancingCondition("3", f"marked cone {tau_key}, basis {i}", coeffs)
            )
    return tuple(out)


def check_balancing(df: DivisorialFan, c: Weight) -> BalancingReport:
    """Evaluate every balancing condition exactly; empty report iff balanced."""
    violations = []
    for cond in balancing_conditions(df, c.codim):
        r = cond.residual(c)
        if r != 0:
            violations.append(BalancingViolation(cond.condition, cond.location, r))
    return BalancingReport(violations)


def weight_basis(df: DivisorialFan, k: int) -> tuple[tuple[Weight, ...], int]:
    """Canonical basis of the lattice of balanced codimension-k weights.

    Rows of the balancing constraint matrix are cleared to integers; the
    basis is the canonical integer kernel, wrapped as weights.
    """
    order = full_index(df, k)
    if not order:
        return (), 0
    rows: list[tuple[int, ...]] = []
    pos = {idx: i for i, idx in enumerate(order)}
    for cond in balancing_conditions(df, k):
        denom = 1
        for coeff in cond.coefficients.values():
            denom = denom * coeff.denominator // __import__("math").gcd(denom, coeff.denominator)
        row = [0] * len(order)
        for idx, coeff in cond.coefficients.items():
            row[pos[idx]] = int(coeff * denom)
        rows.append(tuple(row))
    if not rows:
        rows = [(0,) * len(order)]
    kernel = integer_kernel(as_matrix(rows))
    basis = tuple(
        Weight(df, k, {idx: row[pos[idx]] for idx in order}) for row in kernel
    )
    return basis, len(basis)


def fundamental_weight(df: DivisorialFan) -> Weight:
    """The codimension-0 weight with value 1 on every index."""
    values = {idx: 1 for idx in full_index(df, 0)}
    return Weight(df, 0, values)


def degree_of_top_weight(df: DivisorialFan, c: Weight) -> int:
    """Value of a top-codimension weight at the zero cone."""
    n = df.lattice_rank
    if c.codim != n + 1:
        raise DimensionMismatch(f"weight has codim {c.codim}, expected {n + 1}")
    zero_key = df.cones_of_dim(0)[0]
    return c.values[WeightIndex.horizontal(zero_key)]


def _require_contraction_free(df: DivisorialFan) -> None:
    if df.marked_cones:
        raise MarkedCone("weight restriction requires a contraction-free fan")


def restrict_weight_horizontal(df: DivisorialFan, c: Weight, cone_key: str) -> Weight:
    """Transport of a weight to the orbit-family fan of an unmarked cone:
    star indices keep their original values."""
    _require_contraction_free(df)
    star = df.horizontal_star(cone_key)
    sub = star.fan
    values: dict[WeightIndex, int] = {}
    rev_cells = {
        p: {img: src for src, img in star.cell_maps[p].items()}
        for p in df.marked_points
    }
    rev_cones = {img: src for src, img in star.cone_map.items()}
    for idx in full_index(sub, c.codim):
        if idx.kind == "vertical":
            src = rev_cells[idx.point][idx.key]
            values[idx] = c.values[WeightIndex.vertical(idx.point, src)]
        else:
            values[idx] = c.values[WeightIndex.horizontal(rev_cones[idx.key])]
    return Weight(sub, c.codim, values)


def restrict_weight_vertical(
    df: DivisorialFan, c: Weight, point: str, cell_key: str
) -> dict[str, int]:
    """Transport of a weight to the star fan of a slice cell, as a toric
    Minkowski weight: maps image cones (of the weight's codimension) to the
    original values."""
    _require_contraction_free(df)
    star = df.vertical_star(point, cell_key)
    n = df.lattice_rank
    sl = df.slices[point]
    out: dict[str, int] = {}
    for src, img in star.cell_to_cone.items():
        if sl.cell(src).dim == n - c.codim:
            out[img] = c.values[WeightIndex.vertical(point, src)]
    return out
