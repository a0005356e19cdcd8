"""
Fibers f^-1(a, b) of a plane polynomial map over the rationals.

Elimination works in a sheared frame: the shifted components are composed
with (x, y) -> (x, y + lam*x) and x is eliminated, so the eliminant is a
polynomial in y' = y - lam*x. A frame is used only when both components have
constant leading coefficient in x; then every root of the eliminant lifts to
a common zero, a nonzero constant eliminant proves the fiber empty and a zero
eliminant proves a common curve.
"""
import logging
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, List, NamedTuple, Optional, Tuple

import numpy as np

from ..algebra import MultiPoly, Point, PolyMap, make_point, point_sort_key, shear_map
from ..errors import DegenerateMapError, DegreeCapExceeded
from ..models import AMembership, FiberResult, FiberStatus, Membership
from ..settings import DEFAULT_SETTINGS, SolverSettings
from .resultant import principal_subresultant_coefficient, resultant
from .univariate import gcd_many, gcd_poly, rational_roots, squarefree, univariate_coeffs

logger = logging.getLogger(__name__)


class _Frame(NamedTuple):
    lam: int
    first: MultiPoly
    second: MultiPoly
    eliminant: List[Fraction]  # dense, in the sheared y


@lru_cache(maxsize=128)
def _sheared(f: PolyMap, lam: int) -> PolyMap:
    return f if lam == 0 else shear_map(f, lam)


def _admissible(p: MultiPoly, x: str) -> bool:
    return p.degree_in(x) == p.total_degree


def _shear_sequence(settings: SolverSettings, bound: int) -> Iterator[int]:
    """0 first, then seeded random shears, then a deterministic scan."""
    rng = np.random.default_rng(settings.seed)
    magnitudes = rng.integers(1, 4 * bound + 2, size=settings.shear_retries)
    signs = rng.choice([-1, 1], size=settings.shear_retries)
    draws = [0] + [int(m) * int(s) for m, s in zip(magnitudes, signs)]
    scan = [s * k for k in range(1, 2 * bound + 3) for s in (1, -1)]
    seen = set()
    for lam in draws + scan:
        if lam not in seen:
            seen.add(lam)
            yield lam


def _frames(f: PolyMap, target: Point, settings: SolverSettings) -> Iterator[_Frame]:
    x, y = f.ring
    bound = f.first.total_degree + f.second.total_degree
    for lam in _shear_sequence(settings, bound):
        g = _sheared(f, lam)
        if not (_admissible(g.first, x) and _admissible(g.second, x)):
            logger.debug("shear %d rejected: leading x-coefficient not constant", lam)
            continue
        first, second = g.first - target[0], g.second - target[1]
        eliminant = resultant(first, second, x, settings)
        _, coeffs = univariate_coeffs(eliminant, y)
        logger.debug("shear %d: eliminant of degree %d", lam, len(coeffs) - 1)
        yield _Frame(lam, first, second, coeffs)


def _degenerate_status(first: MultiPoly, second: MultiPoly) -> Optional[FiberStatus]:
    """Status when a shifted component is constant, else None."""
    if first.is_zero or second.is_zero:
        other = second if first.is_zero else first
        if other.is_constant and not other.is_zero:
            return FiberStatus.EMPTY
        return FiberStatus.INFINITE
    if first.is_constant or second.is_constant:
        return FiberStatus.EMPTY
    return None


def _lifts_uniquely(frame: _Frame, sqf: List[Fraction], settings: SolverSettings) -> bool:
    """True when every root of the eliminant has exactly one x above it."""
    x, y = frame.first.ring
    if min(frame.first.degree_in(x), frame.second.degree_in(x)) <= 1:
        return True
    psc = principal_subresultant_coefficient(frame.first, frame.second, x, 1, settings)
    _, coeffs = univariate_coeffs(psc, y)
    return bool(coeffs) and len(gcd_poly(sqf, coeffs)) == 1


def _rational_points(
    f: PolyMap, target: Point, frame: _Frame, sqf: List[Fraction], settings: SolverSettings
) -> Tuple[List[Point], bool]:
    x, y = f.ring
    roots, complete = rational_roots(sqf, settings.root_candidate_cap)
    points = []
    for y0 in roots:
        value = MultiPoly.constant(f.ring, y0)
        pair = [frame.first.substitute({y: value}), frame.second.substitute({y: value})]
        common = gcd_many(pair, f.ring)
        if common.is_constant:
            continue
        _, coeffs = univariate_coeffs(common, x)
        xs, ok = rational_roots(coeffs, settings.root_candidate_cap)
        complete = complete and ok
        for x0 in xs:
            point = (x0, y0 + frame.lam * x0)
            if f.evaluate(point) != target:
                raise ArithmeticError(f"back-substitution produced {point}, which is not a preimage of {target}")
            points.append(point)
    return sorted(points, key=point_sort_key), complete


def solve_fiber(
    f: PolyMap,
    target,
    settings: SolverSettings = DEFAULT_SETTINGS,
    enumerate_rational: bool = True,
) -> FiberResult:
    """
    Decide whether f(x, y) = target has no, finitely many or infinitely many
    complex solutions, count them and list the rational ones.

    With enumerate_rational=False the rational-root search is skipped; status
    and count are unaffected.
    """
    target = make_point(*target)
    if f.degree > settings.degree_cap:
        raise DegreeCapExceeded(f.degree, settings.degree_cap, "solve_fiber")
    p, q = f.components
    if p.is_constant and q.is_constant:
        raise DegenerateMapError(f"both components of {f} are constant")

    status = _degenerate_status(p - target[0], q - target[1])
    if status == FiberStatus.EMPTY:
        return FiberResult(target=target, status=status, distinct_count_over_c=0, certificate="constant-component")
    if status == FiberStatus.INFINITE:
        return FiberResult(target=target, status=status, certificate="common-curve")

    frames = _frames(f, target, settings)
    frame = next(frames)
    eliminant = frame.eliminant
    if not eliminant:
        return FiberResult(target=target, status=FiberStatus.INFINITE, certificate="resultant", shear=frame.lam)
    if len(eliminant) == 1:
        return FiberResult(
            target=target,
            status=FiberStatus.EMPTY,
            distinct_count_over_c=0,
            certificate="resultant",
            shear=frame.lam,
            eliminant_degree=0,
        )

    sqf = squarefree(eliminant)
    distinct = len(sqf) - 1
    certified, certificate = True, "subresultant"
    if not _lifts_uniquely(frame, sqf, settings):
        other = next(frames)
        other_sqf = squarefree(other.eliminant)
        other_distinct = len(other_sqf) - 1
        if _lifts_uniquely(other, other_sqf, settings):
            distinct = other_distinct
        elif other_distinct == distinct:
            certificate = "two-shears"
        else:
            logger.info("shears %d and %d disagree on the fiber count at %s", frame.lam, other.lam, target)
            distinct = max(distinct, other_distinct)
            certified, certificate = False, None

    solutions: List[Point] = []
    complete = enumerate_rational
    if enumerate_rational:
        solutions, complete = _rational_points(f, target, frame, sqf, settings)
        distinct = max(distinct, len(solutions))
    return FiberResult(
        target=target,
        status=FiberStatus.FINITE,
        distinct_count_over_c=distinct,
        certified=certified,
        certificate=certificate,
        rational_solutions=solutions,
        rational_complete=complete,
        shear=frame.lam,
        eliminant_degree=len(eliminant) - 1,
    )


def in_image(f: PolyMap, target, settings: SolverSettings = DEFAULT_SETTINGS) -> Membership:
    fiber = solve_fiber(f, target, settings, enumerate_rational=False)
    return Membership.NO if fiber.is_empty else Membership.YES


def a_membership(f: PolyMap, target, n: int, settings: SolverSettings = DEFAULT_SETTINGS) -> AMembership:
    """Is target in A(f, n), the set of points with at most n preimages?"""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    fiber = solve_fiber(f, target, settings, enumerate_rational=False)
    count = fiber.distinct_count_over_c
    if fiber.status == FiberStatus.INFINITE:
        member = Membership.NO
    elif fiber.certified:
        member = Membership.YES if count <= n else Membership.NO
    else:
        member = Membership.NO if count > n else Membership.INDETERMINATE
    return AMembership(point=fiber.target, n=n, member=member, distinct_count=count, certified=fiber.certified)
