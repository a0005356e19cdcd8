from fractions import Fraction

import pytest

from stable_image.algebra import XY, MultiPoly, PolyMap
from stable_image.algorithms.setdyn import random_cofinite_map
from stable_image.errors import ArityError, DegreeCapExceeded, InvalidNodeError, ParseError, SpecError
from stable_image.models import Core, Ray
from stable_image.parser import (
    SourceText,
    parse_map,
    parse_node,
    parse_point,
    parse_poly,
    parse_spec,
    print_canonical,
    read_source,
)
from stable_image.settings import SolverSettings

x = MultiPoly.variable(XY, "x")
y = MultiPoly.variable(XY, "y")


def random_poly(rng):
    terms = {}
    for _ in range(int(rng.integers(0, 6))):
        mono = tuple(int(e) for e in rng.integers(0, 4, size=2))
        terms[mono] = Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 7)))
    return MultiPoly(XY, terms)


def test_precedence_and_associativity():
    assert parse_poly("1 + 2*x^2", XY) == 1 + 2 * x ** 2
    assert parse_poly("-x^2", XY) == -(x ** 2)
    assert parse_poly("(x+y)^2 - x - y", XY) == (x + y) ** 2 - x - y
    assert parse_poly("x - y - 1", XY) == x - y - 1
    assert parse_poly("3/4*x + 1 / 2", XY) == Fraction(3, 4) * x + Fraction(1, 2)


def test_comments_and_whitespace():
    assert parse_poly("x  # the first coordinate\n + y", XY) == x + y


def test_example_map_parses(example6):
    p = x - 2 * (x * y + 1) - y * (x * y + 1) ** 2
    assert example6 == PolyMap(p, -1 - y * (x * y + 1))


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("x + z", 1, 5),
        ("x^-2", 1, 3),
        ("x +\n  (y", 2, 5),
        ("x * * y", 1, 5),
        ("2 x", 1, 3),
        ("3/0 * x", 1, 1),
        ("", 1, 1),
    ],
)
def test_error_positions(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_poly(text, XY)
    assert (info.value.line, info.value.column) == (line, column)


def test_error_message_names_the_origin():
    with pytest.raises(ParseError) as info:
        parse_poly(SourceText(text="x + w", origin="maps/bad.map"), XY)
    assert str(info.value).startswith("maps/bad.map:1:5:")


def test_exponent_over_the_degree_cap():
    with pytest.raises(DegreeCapExceeded) as info:
        parse_poly("(x+y+1)^400", XY)
    assert info.value.degree == 400
    assert info.value.cap == 64
    with pytest.raises(DegreeCapExceeded):
        parse_map("f(x,y) = (x^1000000000, y)")
    assert parse_poly("(x+y)^64", XY).total_degree == 64


def test_products_respect_the_degree_cap():
    tight = SolverSettings(degree_cap=10)
    assert parse_poly("x^5*y^5", XY, tight).total_degree == 10
    with pytest.raises(DegreeCapExceeded):
        parse_poly("x^5*y^5*x", XY, tight)
    with pytest.raises(DegreeCapExceeded):
        parse_map("f(x,y) = ((x+1)^11, y)", tight)


def test_map_arity_errors():
    with pytest.raises(ArityError):
        parse_map("f(x,y,z) = (x, y)")
    with pytest.raises(ArityError):
        parse_map("f(x,y) = (x, y, x)")
    with pytest.raises(ParseError):
        parse_map("f(x,x) = (x, x)")


def test_map_ring_comes_from_the_head():
    f = parse_map("g(u,v) = (u*v, v)")
    assert f.ring == ("u", "v")
    with pytest.raises(ParseError):
        parse_map("g(u,v) = (x, v)")


@pytest.mark.parametrize(
    "text, expected",
    [
        ("0,0", (0, 0)),
        ("(1/2, -3)", (Fraction(1, 2), -3)),
        ("-2,-1", (-2, -1)),
        ("( -7/3 , 4 )", (Fraction(-7, 3), 4)),
    ],
)
def test_points(text, expected):
    assert parse_point(text) == expected


def test_bad_point():
    with pytest.raises(ParseError):
        parse_point("1,2,3")


def test_nodes():
    assert parse_node("core:c1") == Core("c1")
    assert parse_node("ray:2:13") == Ray(2, 13)
    with pytest.raises(ParseError):
        parse_node("ray:-1:0")


def test_spec_parses(merge_spec):
    assert merge_spec.ray_count == 2
    assert dict(merge_spec.overrides) == {Ray(1, 0): Ray(0, 1)}


@pytest.mark.parametrize(
    "text, error, line",
    [
        ("rays: 1\nmap: ray:0:0 -> ray:0:1\nmap: ray:0:0 -> ray:0:2\n", ParseError, 3),
        ("rays: two\n", ParseError, 1),
        ("rays: 1\nbogus: 3\n", ParseError, 2),
        ("rays: 1\nmap: ray:0:0 => ray:0:1\n", ParseError, 2),
    ],
)
def test_spec_syntax_errors(text, error, line):
    with pytest.raises(error) as info:
        parse_spec(text)
    assert info.value.line == line


def test_spec_semantic_errors():
    with pytest.raises(InvalidNodeError):
        parse_spec("rays: 1\nmap: ray:2:0 -> ray:0:0\n")
    with pytest.raises(SpecError):
        parse_spec("core: c\n")
    with pytest.raises(SpecError):
        parse_spec("# nothing here\n")


def test_poly_round_trip(rng):
    for _ in range(500):
        p = random_poly(rng)
        assert parse_poly(print_canonical(p), XY) == p


def test_map_round_trip(rng):
    for _ in range(100):
        f = PolyMap(random_poly(rng), random_poly(rng))
        assert parse_map(print_canonical(f)) == f


def test_spec_round_trip(rng):
    for _ in range(200):
        spec = random_cofinite_map(rng)
        assert parse_spec(print_canonical(spec)) == spec


def test_sample_files_parse(samples):
    assert parse_map(read_source(samples / "example6.map")).degree == 5
    assert parse_spec(read_source(samples / "three_ray.spec")).ray_count == 3
