from fractions import Fraction

import pytest
import sympy

from stable_image.algebra import (
    XY,
    MultiPoly,
    PolyMap,
    evaluate,
    format_point,
    format_poly,
    jacobian_det,
    partial_derivative,
    poly_arith,
    shear_map,
    substitute,
    to_rational,
)
from stable_image.errors import ArityError, DegreeCapExceeded, RingMismatchError, UnknownVariableError
from stable_image.settings import SolverSettings

x = MultiPoly.variable(XY, "x")
y = MultiPoly.variable(XY, "y")


def random_poly(rng, ring=XY, terms=4, max_degree=3, height=5):
    coeffs = {}
    for _ in range(terms):
        mono = tuple(int(e) for e in rng.integers(0, max_degree + 1, size=len(ring)))
        coeffs[mono] = Fraction(int(rng.integers(-height, height + 1)), int(rng.integers(1, 4)))
    return MultiPoly(ring, coeffs)


def to_sympy(p: MultiPoly):
    symbols = {name: sympy.Symbol(name) for name in p.ring}
    return sympy.sympify(format_poly(p).replace("^", "**"), locals=symbols)


def test_zero_polynomial_conventions():
    zero = MultiPoly.zero(XY)
    assert zero.is_zero
    assert zero.total_degree == -1
    assert zero.degree_in("x") == -1
    assert format_poly(zero) == "0"
    assert (x - x).is_zero


def test_canonical_term_order():
    assert format_poly(x ** 2 - y ** 2) == "x^2 - y^2"
    assert format_poly(y + x) == "x + y"
    assert format_poly(3 - x * y + y ** 3) == "y^3 - x*y + 3"
    assert format_poly((x + Fraction(1, 2)) * 2) == "2*x + 1"


def test_arithmetic_identities():
    assert (x + y) ** 2 == x ** 2 + 2 * x * y + y ** 2
    assert (x + 1) * (x - 1) == x ** 2 - 1
    assert ((x + 1) ** 3).exact_divide(x + 1) == (x + 1) ** 2
    assert 1 - x == -(x - 1)


def test_exact_divide_rejects_remainder():
    with pytest.raises(ArithmeticError):
        (x ** 2 + 1).exact_divide(x + 1)
    with pytest.raises(ZeroDivisionError):
        x.exact_divide(MultiPoly.zero(XY))


def test_evaluate_is_exact():
    p = x ** 2 - Fraction(1, 3) * y
    assert p.evaluate((Fraction(1, 2), 3)) == Fraction(-3, 4)
    assert evaluate(p, ("1/2", 0)) == Fraction(1, 4)
    with pytest.raises(ArityError):
        p.evaluate((1,))


def test_to_rational_refuses_floats():
    assert to_rational("3/4") == Fraction(3, 4)
    with pytest.raises(TypeError):
        to_rational(0.5)


def test_ring_checks():
    other = MultiPoly.variable(("u", "v"), "u")
    with pytest.raises(RingMismatchError):
        x + other
    with pytest.raises(UnknownVariableError):
        MultiPoly.variable(XY, "z")
    with pytest.raises(RingMismatchError):
        PolyMap(x, other)


def test_to_ring_reembeds_used_variables():
    p = (x ** 2 + y).to_ring(("x", "y", "a"))
    assert p.ring == ("x", "y", "a")
    assert p.evaluate((2, 1, 7)) == 5
    with pytest.raises(RingMismatchError):
        p.to_ring(("x",))


def test_substitute_and_degree_cap():
    p = x ** 2 + y
    assert p.substitute({"x": y + 1}) == y ** 2 + 3 * y + 1
    small = SolverSettings(degree_cap=3)
    with pytest.raises(DegreeCapExceeded):
        substitute(p, {"x": y ** 2}, small)


def test_poly_arith_checks():
    small = SolverSettings(degree_cap=4)
    assert poly_arith("mul", x, y, small) == x * y
    with pytest.raises(DegreeCapExceeded):
        poly_arith("pow", x + y, 5, small)
    with pytest.raises(DegreeCapExceeded):
        poly_arith("mul", x ** 3, y ** 2, small)
    with pytest.raises(ValueError):
        poly_arith("pow", x, -1)


def test_partial_derivative():
    p = x ** 3 * y + 2 * x * y ** 2 - 7
    assert partial_derivative(p, "x") == 3 * x ** 2 * y + 2 * y ** 2
    assert partial_derivative(p, "y") == x ** 3 + 4 * x * y
    assert partial_derivative(MultiPoly.constant(XY, 5), "x").is_zero
    with pytest.raises(UnknownVariableError):
        partial_derivative(p, "z")


def test_example_jacobian_values(example6):
    jacobian = jacobian_det(example6)
    assert jacobian == x ** 2 * y ** 4 + 2 * x * y ** 3 + 2 * x * y ** 2 - 2 * x * y + y ** 2 + 2 * y - 1
    assert format_poly(jacobian) == "x^2*y^4 + 2*x*y^3 + 2*x*y^2 - 2*x*y + y^2 + 2*y - 1"
    assert jacobian.evaluate((1, 1)) == 5
    assert jacobian.evaluate((0, 0)) == -1


def test_automorphism_has_unit_jacobian(automorphism):
    assert jacobian_det(automorphism) == 1


def test_jacobian_chain_rule(rng):
    for _ in range(20):
        f = PolyMap(random_poly(rng, terms=3, max_degree=2), random_poly(rng, terms=3, max_degree=2))
        g = PolyMap(random_poly(rng, terms=3, max_degree=2), random_poly(rng, terms=3, max_degree=2))
        outer = jacobian_det(g).substitute({"x": f.first, "y": f.second})
        assert jacobian_det(g.compose(f)) == outer * jacobian_det(f)


def test_example_map_values(example6):
    assert example6.evaluate((3, 0)) == (1, -1)
    assert example6.evaluate((1, -1)) == (1, -1)
    assert example6.evaluate((0, 0)) == (-2, -1)
    assert example6.evaluate((-2, Fraction(1, 2))) == (-2, -1)


def test_compose_and_shear(automorphism):
    twice = automorphism.compose(automorphism)
    assert twice.second == y + 2 * x ** 2
    sheared = shear_map(PolyMap(x, y), 3)
    assert sheared.second == y + 3 * x


def test_polymap_text():
    assert str(PolyMap(x, y + x ** 2)) == "f(x,y) = (x, x^2 + y)"
    assert format_point((Fraction(-1, 2), Fraction(3))) == "(-1/2,3)"


def test_jacobian_matches_sympy(rng):
    sx, sy = sympy.symbols("x y")
    for _ in range(40):
        f = PolyMap(random_poly(rng), random_poly(rng))
        p, q = to_sympy(f.first), to_sympy(f.second)
        expected = sympy.Matrix([[p.diff(sx), p.diff(sy)], [q.diff(sx), q.diff(sy)]]).det()
        assert sympy.expand(expected - to_sympy(jacobian_det(f))) == 0


def test_product_matches_sympy(rng):
    for _ in range(40):
        a, b = random_poly(rng), random_poly(rng)
        assert sympy.expand(to_sympy(a) * to_sympy(b) - to_sympy(a * b)) == 0
