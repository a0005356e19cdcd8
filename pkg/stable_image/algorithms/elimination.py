"""
Rational zeros of small polynomial systems in two unknowns.

Used by the coimage search, where the unknowns are the target coordinates and
the equations are coefficient conditions of a symbolic eliminant.
"""
import logging
from itertools import combinations
from typing import List, NamedTuple, Sequence, Tuple

from ..algebra import MultiPoly, Point, point_sort_key
from ..settings import DEFAULT_SETTINGS, SolverSettings
from .resultant import resultant
from .univariate import gcd_many, rational_roots_of, squarefree_part

logger = logging.getLogger(__name__)


class ZeroSet(NamedTuple):
    points: List[Point]
    complete: bool  # every common zero is rational and listed
    finite: bool  # False: the system has a curve of zeros; points is then empty


def _all_rational(p: MultiPoly, roots: Sequence) -> bool:
    return len(roots) == squarefree_part(p).total_degree


def rational_zeros(
    system: Sequence[MultiPoly], variables: Tuple[str, str], settings: SolverSettings = DEFAULT_SETTINGS
) -> ZeroSet:
    """Common rational zeros of `system`; other ring variables must not occur."""
    u, v = variables
    polys = [p for p in system if not p.is_zero]
    if any(p.is_constant for p in polys):
        return ZeroSet([], True, True)
    if not polys:
        return ZeroSet([], True, False)
    ring = polys[0].ring
    stray = {name for p in polys for name in p.variables()} - {u, v}
    if stray:
        raise ValueError(f"system uses variables {sorted(stray)} besides {u}, {v}")

    eliminants = [p for p in polys if p.degree_in(u) <= 0]
    with_u = [p for p in polys if p.degree_in(u) > 0]
    for a, b in combinations(with_u, 2):
        r = resultant(a, b, u, settings)
        if not r.is_zero:
            eliminants.append(r)
    if not eliminants:
        return ZeroSet([], True, False)

    h = gcd_many(eliminants, ring)
    if h.is_constant:
        return ZeroSet([], True, True)
    v_roots, complete = rational_roots_of(h, settings)
    complete = complete and _all_rational(h, v_roots)

    points: List[Point] = []
    for v0 in v_roots:
        specialized = [p.substitute({v: MultiPoly.constant(ring, v0)}) for p in polys]
        remaining = [s for s in specialized if not s.is_zero]
        if not remaining:
            logger.debug("system vanishes on the whole line %s = %s", v, v0)
            return ZeroSet([], False, False)
        g = gcd_many(remaining, ring)
        if g.is_constant:
            continue
        u_roots, ok = rational_roots_of(g, settings)
        complete = complete and ok and _all_rational(g, u_roots)
        points.extend((u0, v0) for u0 in u_roots)
    return ZeroSet(sorted(points, key=point_sort_key), complete, True)
