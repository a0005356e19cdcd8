from fractions import Fraction

import pytest
import sympy

from stable_image.algebra import XY, MultiPoly
from stable_image.algorithms.univariate import (
    _Budget,
    _isolated_rational_roots,
    _primitive_ints,
    degree,
    derivative,
    distinct_root_count,
    divmod_poly,
    gcd_poly,
    gcd_univariate,
    rational_roots,
    rational_roots_of,
    squarefree,
    squarefree_part,
    univariate_coeffs,
)
from stable_image.errors import MultivariateInputError, ZeroPolynomialError

x = MultiPoly.variable(XY, "x")
y = MultiPoly.variable(XY, "y")


def coeffs_of(*roots):
    """Monic coefficient list (ascending) of prod (t - r)."""
    poly = [Fraction(1)]
    for r in roots:
        r = Fraction(r)
        shifted = [Fraction(0)] + poly
        poly = [shifted[i] - r * (poly[i] if i < len(poly) else 0) for i in range(len(shifted))]
    return poly


@pytest.mark.parametrize(
    "a, b, expected",
    [
        (x ** 2 + 1, x + 2, MultiPoly.constant(XY, 1)),
        (x ** 2 - 1, x ** 2 - 2 * x + 1, x - 1),
        ((x - 3) ** 2 * (x + 1), 2 * (x - 3), x - 3),
        (MultiPoly.zero(XY), 3 * x - 6, x - 2),
    ],
)
def test_gcd_examples(a, b, expected):
    assert gcd_univariate(a, b) == expected


def test_gcd_of_zeros_is_zero():
    zero = MultiPoly.zero(XY)
    assert gcd_univariate(zero, zero).is_zero


def test_gcd_rejects_two_variables():
    with pytest.raises(MultivariateInputError):
        gcd_univariate(x + 1, y + 1)
    with pytest.raises(MultivariateInputError):
        univariate_coeffs(x * y)


def test_squarefree_part():
    assert squarefree_part((x - 1) ** 3 * (x + 2)) == (x - 1) * (x + 2)
    assert squarefree_part(MultiPoly.constant(XY, 7)) == 1
    with pytest.raises(ZeroPolynomialError):
        squarefree_part(MultiPoly.zero(XY))


def test_distinct_root_count_counts_complex_roots():
    # t^4 - 1 has four distinct complex roots, two of them rational
    assert distinct_root_count([-1, 0, 0, 0, 1]) == 4
    assert distinct_root_count(coeffs_of(2, 2, 2, -1)) == 2


def test_rational_roots_with_fractions():
    roots, complete = rational_roots_of(6 * x ** 3 - 11 * x ** 2 + 6 * x - 1)
    assert complete
    assert roots == [Fraction(1, 3), Fraction(1, 2), Fraction(1)]


def test_rational_roots_zero_and_irrational():
    roots, complete = rational_roots([0, 0, -2, 0, 1])  # t^2 (t^2 - 2)
    assert complete
    assert roots == [Fraction(0)]
    roots, _ = rational_roots([1, 0, 1])
    assert roots == []


def test_rational_roots_of_zero_polynomial():
    with pytest.raises(ZeroPolynomialError):
        rational_roots([])


def test_rational_roots_without_factoring():
    # (1000003 t - 999983)(t^2 + 1): both primes are out of reach of a tiny factoring budget
    coeffs = [-999983, 1000003, -999983, 1000003]
    roots, complete = rational_roots(coeffs, cap=200)
    assert complete
    assert roots == [Fraction(999983, 1000003)]


def test_rational_roots_cap_reports_truncation():
    roots, complete = rational_roots([-999983, 1000003, -999983, 1000003], cap=2)
    assert not complete


def test_isolation_agrees_with_divisors(rng):
    for _ in range(30):
        roots = sorted({Fraction(int(rng.integers(-30, 31)), int(rng.integers(1, 12))) for _ in range(3)})
        rational_part = coeffs_of(*roots)
        # times t^2 + 1, which has no real roots
        product = [Fraction(0)] * (len(rational_part) + 2)
        for i, c in enumerate(rational_part):
            product[i] += c
            product[i + 2] += c
        ints = _primitive_ints(squarefree(product))
        assert _isolated_rational_roots(ints, _Budget(100_000)) == (roots, True)
        assert rational_roots(product) == (roots, True)


def test_rational_roots_random_products(rng):
    for _ in range(60):
        roots = sorted({Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6))) for _ in range(3)})
        coeffs = [c * 7 for c in coeffs_of(*roots)]
        found, complete = rational_roots(coeffs)
        assert complete
        assert found == roots


def test_gcd_matches_sympy(rng):
    t = sympy.Symbol("t")
    for _ in range(40):
        shared = [int(c) for c in coeffs_of(*[int(v) for v in rng.integers(-4, 5, size=2)])]
        a = [int(c) for c in rng.integers(-3, 4, size=3)] + [1]
        b = [int(c) for c in rng.integers(-3, 4, size=2)] + [1]
        full_a = sympy.Poly(list(reversed(a)), t) * sympy.Poly(list(reversed(shared)), t)
        full_b = sympy.Poly(list(reversed(b)), t) * sympy.Poly(list(reversed(shared)), t)
        ours = gcd_poly(
            [int(c) for c in reversed(full_a.all_coeffs())],
            [int(c) for c in reversed(full_b.all_coeffs())],
        )
        expected = sympy.gcd(full_a, full_b).monic()
        assert [sympy.Rational(c.numerator, c.denominator) for c in reversed(ours)] == expected.all_coeffs()


def test_squarefree_is_monic():
    assert squarefree([2, 4, 2]) == [Fraction(1), Fraction(1)]


def times(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        for j, v in enumerate(b):
            out[i + j] += u * v
    return out


def random_factored(rng):
    """Integer coefficients of c * prod (t - r)^m * (monic cubic)."""
    poly = [int(c) for c in rng.integers(-4, 5, size=3)] + [1]
    for _ in range(int(rng.integers(1, 4))):
        root = int(rng.integers(-5, 6))
        for _ in range(int(rng.integers(1, 4))):
            poly = times(poly, [-root, 1])
    return [c * int(rng.choice([-3, -1, 2, 5])) for c in poly]


def test_squarefree_properties(rng):
    t = sympy.Symbol("t")
    for _ in range(200):
        p = random_factored(rng)
        sqf = squarefree(p)
        assert sqf[-1] == 1
        assert divmod_poly(p, sqf)[1] == []
        assert gcd_poly(sqf, derivative(sqf)) == [1]
        assert degree(sqf) == sympy.Poly(list(reversed(p)), t).sqf_part().degree()


def test_gcd_divides_both_arguments(rng):
    for _ in range(200):
        shared = random_factored(rng)
        a = times(shared, [int(c) for c in rng.integers(-3, 4, size=2)] + [1])
        b = times(shared, [int(c) for c in rng.integers(-3, 4, size=3)] + [1])
        g = gcd_poly(a, b)
        assert g[-1] == 1
        assert divmod_poly(a, g)[1] == []
        assert divmod_poly(b, g)[1] == []
        assert divmod_poly(g, shared)[1] == []
        cofactor_a, cofactor_b = divmod_poly(a, g)[0], divmod_poly(b, g)[0]
        assert gcd_poly(cofactor_a, cofactor_b) == [1]
