"""
Exact volumes of unit-cube cross-sections {y in [0,1]^m : 0 <= a.y + b <= 1 for every form}.

Vertices are located with qhull in floating point, then each one is snapped to the exact
rational solution of its active facet equations. The volume is the sum of the cones from
the cube centre over the triangulated boundary, with determinants taken in exact arithmetic.
"""
import math
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np
import sympy
from scipy.spatial import ConvexHull, HalfspaceIntersection, QhullError

from SkewLab.exceptions import RejectedInputException

# Slack within which a floating point vertex counts as lying on a facet
ACTIVE_TOLERANCE = 1e-7


class DegenerateSectionException(RejectedInputException):
    pass


def to_sympy(value):
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def to_fraction(value):
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def is_vacuous(row, constant):
    """Whether the form stays inside [0,1] on the whole cube."""
    lo = constant + sum(a for a in row if a < 0)
    hi = constant + sum(a for a in row if a > 0)
    return lo >= 0 and hi <= 1


def reduce_forms(rows, constants):
    """
    Drop vacuous and repeated forms, then drop the coordinates no remaining form uses.
    Dropped coordinates each contribute a factor of 1 to the volume.
    """
    kept = []
    seen = set()
    for row, constant in zip(rows, constants):
        row = tuple(Fraction(a) for a in row)
        constant = Fraction(constant)
        if is_vacuous(row, constant) or (row, constant) in seen:
            continue
        seen.add((row, constant))
        kept.append((row, constant))

    used = sorted({i for row, _ in kept for i, a in enumerate(row) if a})
    return (
        [tuple(row[i] for i in used) for row, _ in kept],
        [constant for _, constant in kept],
    )


def interval_length(rows, constants) -> Fraction:
    lo, hi = Fraction(0), Fraction(1)
    for (a,), b in zip(rows, constants):
        ends = ((-b) / a, (1 - b) / a)
        lo = max(lo, min(ends))
        hi = min(hi, max(ends))
    return max(hi - lo, Fraction(0))


def halfspaces(rows, constants) -> Tuple[List[Tuple[Fraction, ...]], List[Fraction]]:
    """The section as G y <= h: cube bounds first, then both sides of every form."""
    m = len(rows[0])
    G, h = [], []
    for i in range(m):
        unit = tuple(Fraction(int(i == j)) for j in range(m))
        G.append(tuple(-u for u in unit))
        h.append(Fraction(0))
        G.append(unit)
        h.append(Fraction(1))
    for row, constant in zip(rows, constants):
        G.append(row)
        h.append(1 - constant)
        G.append(tuple(-a for a in row))
        h.append(constant)
    return G, h


@lru_cache(maxsize=4096)
def _solve(rows, rhs):
    system = sympy.Matrix([[to_sympy(a) for a in row] for row in rows])
    solution = system.LUsolve(sympy.Matrix([to_sympy(b) for b in rhs]))
    return tuple(to_fraction(v) for v in solution)


def snap_vertex(G, h, point, dimension) -> Tuple[Fraction, ...]:
    A = np.array(G, dtype=float)
    slack = np.array(h, dtype=float) - A @ point
    active = np.flatnonzero(np.abs(slack) <= ACTIVE_TOLERANCE)

    chosen = []
    for index in active:
        candidate = chosen + [int(index)]
        if np.linalg.matrix_rank(A[candidate]) == len(candidate):
            chosen = candidate
        if len(chosen) == dimension:
            break
    if len(chosen) < dimension:
        raise DegenerateSectionException(
            "Vertex {} is not pinned down by its active facets".format(point.tolist())
        )

    vertex = _solve(tuple(G[i] for i in chosen), tuple(h[i] for i in chosen))
    for row, bound in zip(G, h):
        if sum(a * v for a, v in zip(row, vertex)) > bound:
            raise DegenerateSectionException(
                "Snapped vertex {} falls outside the section".format(vertex)
            )
    return vertex


def enumerate_vertices(G, h, center) -> List[Tuple[Fraction, ...]]:
    dimension = len(center)
    stacked = np.array(
        [[float(a) for a in row] + [-float(b)] for row, b in zip(G, h)], dtype=float
    )
    try:
        intersection = HalfspaceIntersection(
            stacked, np.array([float(c) for c in center], dtype=float)
        )
    except QhullError as e:
        raise DegenerateSectionException(str(e))

    vertices = {snap_vertex(G, h, point, dimension) for point in intersection.intersections}
    return sorted(vertices)


def cone_volume(vertices, center) -> Fraction:
    dimension = len(center)
    if len(vertices) <= dimension:
        raise DegenerateSectionException(
            "{} vertices cannot span dimension {}".format(len(vertices), dimension)
        )
    hull = ConvexHull(np.array(vertices, dtype=float), qhull_options="Qt")
    total = Fraction(0)
    for simplex in hull.simplices:
        edges = sympy.Matrix(
            [[to_sympy(vertices[i][j] - center[j]) for j in range(dimension)] for i in simplex]
        )
        total += abs(to_fraction(edges.det(method="bareiss")))
    return total / math.factorial(dimension)


def cube_section_volume(rows: Sequence[Sequence[int]], constants: Sequence[int]) -> Fraction:
    """
    Exact volume of the cube cross-section cut out by 0 <= row.y + constant <= 1.

    The section must contain the cube centre in its interior, which holds for every pair
    partition system since each of its forms evaluates to 1/2 there.
    """
    rows, constants = reduce_forms(rows, constants)
    if any(not any(row) for row in rows):
        # a surviving form with no coordinates has its constant outside [0,1]
        return Fraction(0)
    if not rows:
        return Fraction(1)

    dimension = len(rows[0])
    if dimension == 1:
        return interval_length(rows, constants)

    G, h = halfspaces(rows, constants)
    center = tuple(Fraction(1, 2) for _ in range(dimension))
    for row, bound in zip(G, h):
        if sum(a * c for a, c in zip(row, center)) >= bound:
            raise DegenerateSectionException(
                "The cross-section does not contain the cube centre in its interior"
            )

    return cone_volume(enumerate_vertices(G, h, center), center)
