"""Bundled example datasets.

`hirzebruch2` is the rank-one, two-point divisorial fan of the second
Hirzebruch surface viewed as a torus surface of complexity one, together
with the very ample support function `h` and the reference weight `c1`
shipped with the example in the literature this dataset reproduces.  See
FINDINGS.md for a known inconsistency inside the reference values of
`c1`; the dataset carries them verbatim as data.
"""

from __future__ import annotations

from fractions import Fraction

from .divfan import DivisorialFan, divisorial_fan
from .polyhedra import cone_from_rays, polyhedron
from .support import SupportFunction
from .weights import Weight
from .divfan import WeightIndex


def hirzebruch2_fan() -> DivisorialFan:
    half = Fraction(-1, 2)
    s0 = [
        polyhedron(1, [(half,)], [(-1,)]),
        polyhedron(1, [(half,), (0,)]),
        polyhedron(1, [(0,)], [(1,)]),
    ]
    sinf = [
        polyhedron(1, [(0,)], [(-1,)]),
        polyhedron(1, [(0,)], [(1,)]),
    ]
    rec = [cone_from_rays(1, [(-1,)]), cone_from_rays(1, [(1,)])]
    return divisorial_fan(1, ("0", "inf"), {"0": s0, "inf": sinf}, rec)


def hirzebruch2_support(df: DivisorialFan) -> SupportFunction:
    half = Fraction(-1, 2)
    left0 = polyhedron(1, [(half,)], [(-1,)]).key
    mid0 = polyhedron(1, [(half,), (0,)]).key
    right0 = polyhedron(1, [(0,)], [(1,)]).key
    leftinf = polyhedron(1, [(0,)], [(-1,)]).key
    rightinf = polyhedron(1, [(0,)], [(1,)]).key
    tau0 = cone_from_rays(1, [(-1,)]).key
    tau1 = cone_from_rays(1, [(1,)]).key
    return SupportFunction(
        df,
        {
            "0": {left0: ((3,), 1), mid0: ((1,), 0), right0: ((0,), 0)},
            "inf": {leftinf: ((3,), -1), rightinf: ((0,), -1)},
        },
        {tau0: (3,), tau1: (0,)},
    )


def hirzebruch2_reference_weight(df: DivisorialFan) -> Weight:
    """The codimension-1 weight shipped with the reference example.

    Vertex values (1, 1, 3) agree with pairing the bundled `h` against the
    fundamental weight; the ray values (3, 2) are the published ones and
    do not (see FINDINGS.md).  The weight is balanced either way.
    """
    v_half = polyhedron(1, [(Fraction(-1, 2),)]).key
    v0 = polyhedron(1, [(0,)]).key
    tau0 = cone_from_rays(1, [(-1,)]).key
    tau1 = cone_from_rays(1, [(1,)]).key
    values = {
        WeightIndex.vertical("0", v_half): 1,
        WeightIndex.vertical("0", v0): 1,
        WeightIndex.vertical("inf", v0): 3,
        WeightIndex.horizontal(tau1): 3,
        WeightIndex.horizontal(tau0): 2,
    }
    return Weight(df, 1, values)


def hirzebruch2_marked_fan(stabilizer: Fraction | int = 1) -> DivisorialFan:
    """The same surface with the honest marking: the left ray is contracted,
    so the torus surface is the Hirzebruch surface itself rather than its
    blowup.  The stabilizer index of the marked ray is 1."""
    base = hirzebruch2_fan()
    tau0 = cone_from_rays(1, [(-1,)]).key
    return DivisorialFan(
        base.lattice_rank,
        base.marked_points,
        base.slices,
        base.recession,
        [tau0],
        {tau0: Fraction(stabilizer)},
    )
