from fractions import Fraction

import pytest

from stable_image.algebra import XY, MultiPoly, PolyMap, shear_map
from stable_image.algorithms.elimination import rational_zeros
from stable_image.algorithms.fibers import a_membership, in_image, solve_fiber
from stable_image.algorithms.imagedyn import low_height_points
from stable_image.errors import DegenerateMapError, DegreeCapExceeded
from stable_image.models import FiberStatus, Membership
from stable_image.parser import parse_map
from stable_image.settings import SolverSettings

x = MultiPoly.variable(XY, "x")
y = MultiPoly.variable(XY, "y")


def pt(a, b):
    return (Fraction(a), Fraction(b))


def test_origin_is_omitted(example6):
    result = solve_fiber(example6, (0, 0))
    assert result.status == FiberStatus.EMPTY
    assert result.distinct_count_over_c == 0
    assert in_image(example6, (0, 0)) == Membership.NO


def test_two_preimages_of_the_origin_image(example6):
    result = solve_fiber(example6, (-2, -1))
    assert result.status == FiberStatus.FINITE
    assert result.distinct_count_over_c == 2
    assert result.rational_solutions == [pt(0, 0), pt(-2, Fraction(1, 2))]
    assert result.rational_complete


def test_non_injective_pair(example6):
    result = solve_fiber(example6, (1, -1))
    assert set(result.rational_solutions) == {pt(3, 0), pt(1, -1)}
    assert result.distinct_count_over_c == 2


def test_single_preimage(example6):
    result = solve_fiber(example6, (0, -1))
    assert result.rational_solutions == [pt(2, 0)]
    assert result.distinct_count_over_c == 1


def test_every_rational_solution_maps_to_the_target(example6, rng):
    for _ in range(10):
        source = pt(int(rng.integers(-3, 4)), Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 3))))
        target = example6.evaluate(source)
        result = solve_fiber(example6, target)
        assert source in result.rational_solutions
        assert all(example6.evaluate(s) == target for s in result.rational_solutions)
        assert result.distinct_count_over_c >= len(result.rational_solutions)


def test_automorphism_fibers_are_points(automorphism):
    for target in [(0, 0), (3, -1), (Fraction(1, 2), 7)]:
        result = solve_fiber(automorphism, target)
        assert result.status == FiberStatus.FINITE
        assert result.distinct_count_over_c == 1
        assert result.certified
        a, b = (Fraction(v) for v in target)
        assert result.rational_solutions == [(a, b - a * a)]


def test_irrational_fiber_counts_over_c():
    square = parse_map("f(x,y) = (x^2, y)")
    result = solve_fiber(square, (2, 0))
    assert result.distinct_count_over_c == 2
    assert result.rational_solutions == []
    assert result.certified
    assert solve_fiber(square, (0, 5)).distinct_count_over_c == 1


def test_constant_component():
    f = PolyMap(x, MultiPoly.constant(XY, 3))
    assert solve_fiber(f, (1, 2)).status == FiberStatus.EMPTY
    assert solve_fiber(f, (1, 3)).status == FiberStatus.INFINITE


def test_finite_fiber_with_a_square_component():
    result = solve_fiber(PolyMap(x, y ** 2), (1, 4))
    assert result.status == FiberStatus.FINITE
    assert result.distinct_count_over_c == 2
    assert result.rational_solutions == [pt(1, -2), pt(1, 2)]


def test_infinite_fibers():
    fold = parse_map("f(x,y) = (x^2, x*y)")
    assert solve_fiber(fold, (0, 0)).status == FiberStatus.INFINITE
    assert solve_fiber(fold, (0, 1)).status == FiberStatus.EMPTY
    assert solve_fiber(fold, (4, 2)).distinct_count_over_c == 2
    collapsed = PolyMap(x + y, 2 * x + 2 * y)
    assert solve_fiber(collapsed, (1, 2)).status == FiberStatus.INFINITE
    assert solve_fiber(collapsed, (1, 3)).status == FiberStatus.EMPTY


def test_degenerate_and_capped_maps():
    with pytest.raises(DegenerateMapError):
        solve_fiber(PolyMap(MultiPoly.constant(XY, 1), MultiPoly.constant(XY, 2)), (1, 2))
    with pytest.raises(DegreeCapExceeded):
        solve_fiber(PolyMap(x ** 9, y), (0, 0), SolverSettings(degree_cap=8))


def test_seed_does_not_change_the_answer(example6):
    counts = {solve_fiber(example6, (1, 1), SolverSettings(seed=seed)).distinct_count_over_c for seed in range(4)}
    assert counts == {2}


def test_a_membership(example6):
    assert a_membership(example6, (0, 0), 0).member == Membership.YES
    assert a_membership(example6, (0, -1), 1).member == Membership.YES
    assert a_membership(example6, (1, -1), 1).member == Membership.NO
    assert a_membership(example6, (1, -1), 2).member == Membership.YES
    fold = parse_map("f(x,y) = (x^2, x*y)")
    assert a_membership(fold, (0, 0), 5).member == Membership.NO


def test_rational_zeros_of_small_systems():
    a = MultiPoly.variable(XY, "x")
    b = MultiPoly.variable(XY, "y")
    zeros = rational_zeros([a * b, a + b - 1], ("x", "y"))
    assert zeros.finite and zeros.complete
    assert zeros.points == [pt(0, 1), pt(1, 0)]
    assert rational_zeros([a - b], ("x", "y")).finite is False
    assert rational_zeros([a, MultiPoly.constant(XY, 1)], ("x", "y")).points == []
    irrational = rational_zeros([a ** 2 - 2, b], ("x", "y"))
    assert irrational.points == [] and not irrational.complete


def random_quadratic_map(rng):
    while True:
        components = []
        for _ in range(2):
            terms = {mono: int(rng.integers(-3, 4)) for mono in [(2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0)]}
            components.append(MultiPoly(XY, terms))
        if not any(c.is_constant for c in components):
            return PolyMap(*components)


def test_bezout_bound(rng):
    for _ in range(15):
        f = random_quadratic_map(rng)
        bound = f.first.total_degree * f.second.total_degree
        for target in [(0, 0), (1, -1), (int(rng.integers(-4, 5)), int(rng.integers(-4, 5)))]:
            result = solve_fiber(f, target)
            if result.status == FiberStatus.FINITE:
                assert len(result.rational_solutions) <= result.distinct_count_over_c <= bound
            if result.status == FiberStatus.EMPTY:
                assert result.distinct_count_over_c == 0
                assert result.rational_solutions == []


def test_status_survives_source_shears(rng):
    for _ in range(10):
        f = random_quadratic_map(rng)
        target = (int(rng.integers(-3, 4)), int(rng.integers(-3, 4)))
        base = solve_fiber(f, target)
        for lam in rng.integers(-5, 6, size=3):
            sheared = solve_fiber(shear_map(f, int(lam)), target)
            assert sheared.status == base.status
            if base.certified and sheared.certified:
                assert sheared.distinct_count_over_c == base.distinct_count_over_c


def test_status_does_not_depend_on_the_seed(rng):
    for _ in range(10):
        f = random_quadratic_map(rng)
        target = (int(rng.integers(-3, 4)), int(rng.integers(-3, 4)))
        statuses = {solve_fiber(f, target, SolverSettings(seed=seed)).status for seed in (0, 1, 2)}
        assert len(statuses) == 1


def test_empty_fibers_miss_the_grid(example6):
    images = {example6.evaluate(s) for s in low_height_points(2)}
    empty = [t for t in low_height_points(2) if solve_fiber(example6, t).status == FiberStatus.EMPTY]
    assert pt(0, 0) in empty
    assert not images.intersection(empty)
    for target in {example6.evaluate(s) for s in low_height_points(1)}:
        assert in_image(example6, target) == Membership.YES


@pytest.mark.parametrize("target", [(0, 0), (-2, -1), (1, -1), (0, -1), (1, 1), (2, 3)])
def test_a_membership_is_monotone_in_n(example6, target):
    members = [a_membership(example6, target, n).member for n in range(5)]
    for n, member in enumerate(members):
        if member == Membership.YES:
            assert all(later == Membership.YES for later in members[n:])
