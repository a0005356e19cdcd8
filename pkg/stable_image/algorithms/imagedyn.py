"""
Iterated images of plane polynomial maps.

Membership in f^k(C^2) is decided by chaining fiber solves over a finite probe
universe instead of composing f with itself, since deg f^k grows like d^k.
"""
import logging
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from ..algebra import (
    MultiPoly,
    Point,
    PolyMap,
    format_point,
    jacobian_det,
    make_point,
    point_sort_key,
)
from ..errors import DegreeCapExceeded, NotApplicableError
from ..models import (
    CoimageSearch,
    CoverageSummary,
    FiberResult,
    FiberStatus,
    IndeterminatePoint,
    InjectivityWitness,
    MapClassification,
    MapKind,
    Membership,
    StabilizationReport,
)
from ..settings import DEFAULT_SETTINGS, SolverSettings
from .elimination import rational_zeros
from .fibers import in_image, solve_fiber
from .resultant import resultant
from .univariate import gcd_many, rational_roots_of, squarefree_part

logger = logging.getLogger(__name__)


def _sorted_points(points: Iterable[Point]) -> List[Point]:
    return sorted(set(points), key=point_sort_key)


def _format_set(points: Sequence[Point]) -> str:
    return "{" + ", ".join(format_point(p) for p in points) + "}"


def iterate_map(f: PolyMap, k: int, settings: SolverSettings = DEFAULT_SETTINGS) -> PolyMap:
    """f composed with itself k times."""
    if k < 1:
        raise NotApplicableError(f"iterate count must be positive, got {k}")
    bound = max(f.degree, 1) ** k
    if bound > settings.degree_cap:
        raise DegreeCapExceeded(bound, settings.degree_cap, f"iterate_map k={k}")
    result = f
    for _ in range(k - 1):
        result = f.compose(result, settings)
    return result


def classify(f: PolyMap) -> MapClassification:
    jacobian = jacobian_det(f)
    if jacobian.is_zero:
        kind = MapKind.DEGENERATE_JACOBIAN
    elif jacobian.is_constant:
        kind = MapKind.JACOBIAN_PAIR
    else:
        kind = MapKind.NON_CONSTANT_JACOBIAN
    return MapClassification(jacobian=jacobian, kind=kind)


# -- coimage search -----------------------------------------------------------


def _parameter_names(ring: Sequence[str]) -> Tuple[str, str]:
    a, b = "a", "b"
    while a in ring or b in ring:
        a, b = a + "_", b + "_"
    return a, b


def _strip_content(s: MultiPoly, free: str) -> MultiPoly:
    """Divide out the gcd of the coefficients of s, seen as polynomials in `free`."""
    i = s.index(free)
    groups: Dict[tuple, Dict[tuple, Fraction]] = {}
    for mono, coeff in s.terms.items():
        rest = mono[:i] + (0,) + mono[i + 1:]
        only_free = tuple(e if j == i else 0 for j, e in enumerate(mono))
        groups.setdefault(rest, {})[only_free] = coeff
    content = gcd_many([MultiPoly(s.ring, terms) for terms in groups.values()], s.ring)
    return s.exact_divide(content) if not content.is_constant else s


def _spurious_roots(
    components: Sequence[MultiPoly], elim: str, settings: SolverSettings
) -> Tuple[List[Fraction], bool]:
    """
    Values of the free variable where every leading coefficient in `elim`
    vanishes; the flag is False unless there is at most one such value and
    it is rational.
    """
    ring = components[0].ring
    leads = [c.leading_coefficient_in(elim) for c in components if c.degree_in(elim) > 0]
    common = gcd_many(leads, ring)
    if common.is_constant:
        return [], True
    roots, complete = rational_roots_of(common, settings)
    exact = complete and len(roots) == 1 and squarefree_part(common).total_degree == 1
    return roots, exact


def _critical_values(f: PolyMap, settings: SolverSettings) -> List[Point]:
    """Images of rational points of J(f) = 0 on the lines x = t, |t| <= critical_line_span."""
    x, _ = f.ring
    jacobian = jacobian_det(f)
    values = []
    span = settings.critical_line_span
    for t in range(-span, span + 1):
        line = jacobian.substitute({x: MultiPoly.constant(f.ring, t)})
        if line.is_constant:
            continue
        roots, _ = rational_roots_of(line, settings)
        values.extend(f.evaluate((Fraction(t), y0)) for y0 in roots)
    return values


def coimage_candidates(f: PolyMap, settings: SolverSettings = DEFAULT_SETTINGS) -> CoimageSearch:
    """
    Propose points outside f(C^2) and certify each one with in_image.

    Let S(y; a, b) = Res_x(p - a, q - b) with its y-content removed. A target
    has an empty fiber only if S(y; a, b) is a nonzero constant in y or all of
    its roots sit where both leading x-coefficients vanish; both conditions
    are coefficient systems in (a, b) solved for rational zeros.
    """
    if classify(f).kind == MapKind.DEGENERATE_JACOBIAN:
        raise NotApplicableError("coimage search needs a map with nonzero Jacobian")
    x, y = f.ring
    a, b = _parameter_names(f.ring)
    ring = (x, y, a, b)
    p, q = (c.to_ring(ring) for c in f.components)
    elim, free = (x, y) if p.degree_in(x) > 0 or q.degree_in(x) > 0 else (y, x)
    shifted_p = p - MultiPoly.variable(ring, a)
    shifted_q = q - MultiPoly.variable(ring, b)

    notes: List[str] = []
    exhausted = True
    found: Set[Point] = set()
    eliminant = resultant(shifted_p, shifted_q, elim, settings)
    if eliminant.is_zero:
        exhausted = False
        notes.append("symbolic eliminant vanishes identically; generic fibers are not finite")
    else:
        reduced = _strip_content(eliminant, free)
        coeffs = reduced.coefficients_in(free)
        top = max(coeffs)
        zero = MultiPoly.zero(ring)
        if top == 0:
            exhausted = False
            notes.append(f"symbolic eliminant is free of {free}; the image is not dense")
        else:
            systems = [[coeffs.get(j, zero) for j in range(1, top + 1)]]
            roots, exact = _spurious_roots((p, q), elim, settings)
            if not exact:
                exhausted = False
                notes.append("leading coefficients vanish on several or irrational lines; those lines were not searched")
            for root in roots:
                moved = reduced.substitute({free: MultiPoly.variable(ring, free) + root})
                moved_coeffs = moved.coefficients_in(free)
                for m in range(1, top + 1):
                    systems.append([moved_coeffs.get(j, zero) for j in range(top + 1) if j != m])
            logger.debug("coimage search: %d coefficient systems, eliminant degree %d in %s", len(systems), top, free)
            for system in systems:
                zeros = rational_zeros(system, (a, b), settings)
                if not zeros.finite:
                    exhausted = False
                    notes.append("a coefficient system has a curve of solutions")
                    continue
                if not zeros.complete:
                    exhausted = False
                    notes.append("a coefficient system has irrational solutions")
                found.update(zeros.points)

    found.update(_critical_values(f, settings))
    candidates = _sorted_points(found)
    coimage, refuted = [], []
    for point in candidates:
        (coimage if in_image(f, point, settings) == Membership.NO else refuted).append(point)
    if not exhausted:
        logger.warning("coimage search truncated for %s", f)
    return CoimageSearch(
        candidates=candidates,
        coimage=coimage,
        refuted=refuted,
        exhausted=exhausted,
        notes=sorted(set(notes)),
    )


# -- stabilization ------------------------------------------------------------


def _closure(f: PolyMap, seeds: Iterable[Point], steps: int, omitted: Set[Point]) -> Set[Point]:
    universe = set(seeds)
    frontier = list(universe)
    for _ in range(steps):
        fresh = []
        for point in frontier:
            image = f.evaluate(point)
            if image not in universe and image not in omitted:
                universe.add(image)
                fresh.append(image)
        frontier = fresh
    return universe


def _omitted_invariant(omitted: Set[Point], image_of: Dict[Point, Point], fiber) -> Optional[bool]:
    """Does every preimage of a point of F lie in F?"""
    verdict: Optional[bool] = True
    for z in _sorted_points(omitted):
        result = fiber(z)
        if result.is_empty:
            continue
        if result.status == FiberStatus.INFINITE:
            return False
        inside = sum(1 for s in omitted if image_of[s] == z)
        if result.distinct_count_over_c > inside:
            return False
        if not result.certified:
            verdict = None
    return verdict


def stabilization_report(
    f: PolyMap,
    candidates: Iterable,
    k_max: Optional[int] = None,
    omitted: Iterable = (),
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> StabilizationReport:
    """
    Probe E^k = Omega - f^k(Omega) on the f-closure of the candidates, where
    Omega = C^2 - omitted.

    Each probed E^k lies in the closure whenever the candidates contain the
    coimage, so a preimage outside the closure certifies membership in the
    image. A point is omitted at level k when its fiber is empty, or when the
    certified fiber count equals the number of known preimages and all of
    them are omitted at level k-1 (or lie outside Omega).
    """
    k_max = k_max or settings.k_max
    forbidden = set(make_point(*c) for c in omitted)
    seeds = [c for c in (make_point(*c) for c in candidates) if c not in forbidden]
    universe = _closure(f, seeds, k_max, forbidden)
    image_of = {s: f.evaluate(s) for s in universe | forbidden}
    known: Dict[Point, List[Point]] = {u: [] for u in universe}
    for s, image in image_of.items():
        if image in known:
            known[image].append(s)
    logger.debug("probe universe: %d points from %d candidates", len(universe), len(seeds))

    fibers: Dict[Point, FiberResult] = {}

    def fiber(point: Point) -> FiberResult:
        if point not in fibers:
            fibers[point] = solve_fiber(f, point, settings, enumerate_rational=False)
        return fibers[point]

    invariant = _omitted_invariant(forbidden, image_of, fiber) if forbidden else None

    chain: List[List[Point]] = []
    undecided: List[IndeterminatePoint] = []
    previous: Set[Point] = set()
    previous_unknown: Set[Point] = set()
    for k in range(1, k_max + 1):
        level: Set[Point] = set()
        unknown: Set[Point] = set()
        for u in _sorted_points(universe):
            preimages = known[u]
            if any(s not in forbidden and s not in previous and s not in previous_unknown for s in preimages):
                continue
            result = fiber(u)
            if result.is_empty:
                level.add(u)
                continue
            if result.status == FiberStatus.INFINITE or result.distinct_count_over_c > len(preimages):
                continue
            if result.certified and not any(s in previous_unknown for s in preimages):
                level.add(u)
            else:
                unknown.add(u)
        chain.append(_sorted_points(level))
        undecided.extend(IndeterminatePoint(level=k, point=u) for u in _sorted_points(unknown))
        logger.debug("level %d: %d omitted, %d undecided", k, len(level), len(unknown))
        previous, previous_unknown = level, unknown

    index = None
    for k in range(1, k_max):
        settled = all(chain[j] == chain[k - 1] for j in range(k, k_max))
        clean = not any(item.level >= k for item in undecided)
        if settled and clean:
            index = k
            break

    omega = "C^2" if not forbidden else f"C^2 - {_format_set(_sorted_points(forbidden))}"
    if index is None:
        note = f"stabilization not reached within k_max={k_max}"
    else:
        note = (
            f"stable image = {omega} minus {_format_set(chain[index - 1])} from k={index} on, "
            "provided the candidates contain the coimage"
        )
    return StabilizationReport(
        candidates=_sorted_points(seeds),
        omitted=_sorted_points(forbidden),
        omitted_invariant=invariant,
        universe=_sorted_points(universe),
        chain=chain,
        k_max=k_max,
        stabilization_index=index,
        indeterminate=undecided,
        stable_image_note=note,
    )


# -- injectivity and sampling -------------------------------------------------


def injectivity_witness_search(
    f: PolyMap,
    targets: Iterable,
    omitted: Iterable = (),
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> Optional[InjectivityWitness]:
    """
    First pair of distinct rational points (outside `omitted`) with a common
    image among the targets. None is not a proof of injectivity.
    """
    forbidden = set(make_point(*c) for c in omitted)
    for target in targets:
        target = make_point(*target)
        fiber = solve_fiber(f, target, settings)
        solutions = [s for s in fiber.rational_solutions if s not in forbidden]
        if len(solutions) < 2:
            continue
        first, second = solutions[:2]
        if first == second or f.evaluate(first) != target or f.evaluate(second) != target:
            raise ArithmeticError(f"witness at {format_point(target)} failed to re-verify")
        return InjectivityWitness(first=first, second=second, common_image=target)
    return None


def _rationals_of_height(height: int) -> List[Fraction]:
    values = {
        Fraction(n, d)
        for d in range(1, height + 1)
        for n in range(-height, height + 1)
        if gcd(n, d) == 1
    }
    return sorted(values)


def low_height_points(height: int) -> List[Point]:
    """All rational points of height <= height, by height then lexicographically."""
    if height < 1:
        return []
    values = _rationals_of_height(height)
    return sorted(((u, v) for u in values for v in values), key=point_sort_key)


def random_rational_point(rng: np.random.Generator, height: int) -> Point:
    parts = []
    for _ in range(2):
        numerator = int(rng.integers(-height, height + 1))
        denominator = int(rng.integers(1, height + 1))
        parts.append(Fraction(numerator, denominator))
    return tuple(parts)


def sample_image_coverage(
    f: PolyMap,
    count: int,
    height: int,
    seed: int = 0,
    exclude: Iterable = (),
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> CoverageSummary:
    """Solve fibers at `count` seeded random points of bounded height."""
    rng = np.random.default_rng(seed)
    skip = set(make_point(*c) for c in exclude)
    tallies = {FiberStatus.FINITE: 0, FiberStatus.INFINITE: 0}
    empty = []
    drawn = 0
    while drawn < count:
        point = random_rational_point(rng, height)
        if point in skip:
            continue
        drawn += 1
        result = solve_fiber(f, point, settings, enumerate_rational=False)
        if result.is_empty:
            empty.append(point)
        else:
            tallies[result.status] += 1
    return CoverageSummary(
        total=count,
        finite=tallies[FiberStatus.FINITE],
        infinite=tallies[FiberStatus.INFINITE],
        empty_points=sorted(empty, key=point_sort_key),
    )
