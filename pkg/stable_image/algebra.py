"""
Exact polynomial arithmetic over the rationals.

MultiPoly is a sparse polynomial in an ordered tuple of variables with
Fraction coefficients; PolyMap is a pair of MultiPoly in a two-variable ring.
Both are immutable once built.
"""
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import (
    ArityError,
    DegreeCapExceeded,
    RingMismatchError,
    UnknownVariableError,
)
from .settings import DEFAULT_SETTINGS, SolverSettings

Rational = Fraction
Monomial = Tuple[int, ...]
Point = Tuple[Fraction, Fraction]
Scalar = Union[int, Fraction]

XY = ("x", "y")


def to_rational(value) -> Fraction:
    """Coerce ints, Fractions and 'n/d' strings; floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError(f"not an exact rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not an exact rational: {value!r}")


def make_point(a, b) -> Point:
    return (to_rational(a), to_rational(b))


def monomial_key(mono: Monomial) -> Tuple[int, Monomial]:
    # graded lexicographic, variables in ring order
    return (sum(mono), mono)


class MultiPoly:
    __slots__ = ("_ring", "_terms", "_hash")

    def __init__(self, ring: Sequence[str], terms: Optional[Mapping[Monomial, Scalar]] = None):
        ring = tuple(ring)
        if len(set(ring)) != len(ring):
            raise RingMismatchError(f"duplicate variable in ring {ring}")
        clean: Dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != len(ring):
                raise ArityError(f"monomial {mono} does not fit ring {ring}")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in monomial {mono}")
            value = to_rational(coeff)
            if value:
                clean[mono] = clean.get(mono, Fraction(0)) + value
        self._ring = ring
        self._terms = {m: c for m, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, ring: Tuple[str, ...], terms: Dict[Monomial, Fraction]) -> "MultiPoly":
        poly = object.__new__(cls)
        poly._ring = ring
        poly._terms = terms
        poly._hash = None
        return poly

    @classmethod
    def zero(cls, ring: Sequence[str]) -> "MultiPoly":
        return cls._raw(tuple(ring), {})

    @classmethod
    def constant(cls, ring: Sequence[str], value: Scalar) -> "MultiPoly":
        ring = tuple(ring)
        value = to_rational(value)
        return cls._raw(ring, {(0,) * len(ring): value} if value else {})

    @classmethod
    def variable(cls, ring: Sequence[str], name: str) -> "MultiPoly":
        ring = tuple(ring)
        if name not in ring:
            raise UnknownVariableError(name, ring)
        mono = tuple(1 if v == name else 0 for v in ring)
        return cls._raw(ring, {mono: Fraction(1)})

    @classmethod
    def from_univariate(cls, coeffs: Sequence[Fraction], var: str, ring: Sequence[str]) -> "MultiPoly":
        """Build sum(coeffs[i] * var^i) in `ring`."""
        ring = tuple(ring)
        if var not in ring:
            raise UnknownVariableError(var, ring)
        idx = ring.index(var)
        terms = {}
        for power, coeff in enumerate(coeffs):
            if coeff:
                mono = [0] * len(ring)
                mono[idx] = power
                terms[tuple(mono)] = to_rational(coeff)
        return cls._raw(ring, terms)

    # -- inspection ---------------------------------------------------------

    @property
    def ring(self) -> Tuple[str, ...]:
        return self._ring

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    @property
    def constant_value(self) -> Fraction:
        if not self.is_constant:
            raise ValueError(f"{self} is not constant")
        return self._terms.get((0,) * len(self._ring), Fraction(0))

    @property
    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def index(self, var: str) -> int:
        try:
            return self._ring.index(var)
        except ValueError:
            raise UnknownVariableError(var, self._ring)

    def degree_in(self, var: str) -> int:
        i = self.index(var)
        return max((m[i] for m in self._terms), default=-1)

    def variables(self) -> Tuple[str, ...]:
        """Ring variables that occur with positive exponent."""
        return tuple(v for i, v in enumerate(self._ring) if any(m[i] for m in self._terms))

    def sorted_terms(self) -> List[Tuple[Monomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda item: monomial_key(item[0]), reverse=True)

    def leading_term(self) -> Tuple[Monomial, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        mono = max(self._terms, key=monomial_key)
        return mono, self._terms[mono]

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> Optional["MultiPoly"]:
        if isinstance(other, MultiPoly):
            if other._ring != self._ring:
                raise RingMismatchError(f"ring mismatch: {self._ring} vs {other._ring}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return MultiPoly.constant(self._ring, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for mono, coeff in other._terms.items():
            value = terms.get(mono, 0) + coeff
            if value:
                terms[mono] = value
            else:
                terms.pop(mono, None)
        return MultiPoly._raw(self._ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self._ring, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                value = terms.get(mono, 0) + c1 * c2
                if value:
                    terms[mono] = value
                else:
                    terms.pop(mono, None)
        return MultiPoly._raw(self._ring, terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"exponent must be a nonnegative integer, got {exponent!r}")
        result = MultiPoly.constant(self._ring, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def scale(self, factor: Scalar) -> "MultiPoly":
        factor = to_rational(factor)
        if not factor:
            return MultiPoly.zero(self._ring)
        return MultiPoly._raw(self._ring, {m: c * factor for m, c in self._terms.items()})

    def exact_divide(self, divisor: "MultiPoly") -> "MultiPoly":
        """Quotient of an exact division; raises ArithmeticError on a remainder."""
        divisor = self._coerce(divisor)
        if divisor.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        if divisor.is_constant:
            return self.scale(1 / divisor.constant_value)
        lead_mono, lead_coeff = divisor.leading_term()
        remainder = dict(self._terms)
        quotient: Dict[Monomial, Fraction] = {}
        while remainder:
            mono = max(remainder, key=monomial_key)
            shift = tuple(a - b for a, b in zip(mono, lead_mono))
            if any(e < 0 for e in shift):
                raise ArithmeticError(f"{divisor} does not divide {self}")
            factor = remainder[mono] / lead_coeff
            quotient[shift] = factor
            for dm, dc in divisor._terms.items():
                target = tuple(a + b for a, b in zip(shift, dm))
                value = remainder.get(target, 0) - factor * dc
                if value:
                    remainder[target] = value
                else:
                    remainder.pop(target, None)
        return MultiPoly._raw(self._ring, quotient)

    # -- calculus and structure ----------------------------------------------

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != len(self._ring):
            raise ArityError(f"point of length {len(point)} for ring {self._ring}")
        values = [to_rational(v) for v in point]
        total = Fraction(0)
        for mono, coeff in self._terms.items():
            term = coeff
            for value, e in zip(values, mono):
                if e:
                    term *= value ** e
            total += term
        return total

    def partial(self, var: str) -> "MultiPoly":
        i = self.index(var)
        terms = {}
        for mono, coeff in self._terms.items():
            if mono[i]:
                lowered = mono[:i] + (mono[i] - 1,) + mono[i + 1:]
                terms[lowered] = coeff * mono[i]
        return MultiPoly._raw(self._ring, terms)

    def coefficients_in(self, var: str) -> Dict[int, "MultiPoly"]:
        """Split into {power: coefficient} with coefficients free of `var`."""
        i = self.index(var)
        groups: Dict[int, Dict[Monomial, Fraction]] = {}
        for mono, coeff in self._terms.items():
            stripped = mono[:i] + (0,) + mono[i + 1:]
            groups.setdefault(mono[i], {})[stripped] = coeff
        return {power: MultiPoly._raw(self._ring, terms) for power, terms in groups.items()}

    def leading_coefficient_in(self, var: str) -> "MultiPoly":
        degree = self.degree_in(var)
        if degree < 0:
            return MultiPoly.zero(self._ring)
        return self.coefficients_in(var)[degree]

    def to_ring(self, ring: Sequence[str]) -> "MultiPoly":
        """Re-embed into another ring containing every variable in use."""
        ring = tuple(ring)
        if ring == self._ring:
            return self
        used = self.variables()
        missing = [v for v in used if v not in ring]
        if missing:
            raise RingMismatchError(f"variables {missing} are not in ring {ring}")
        positions = [(ring.index(v), i) for i, v in enumerate(self._ring) if v in ring]
        terms = {}
        for mono, coeff in self._terms.items():
            new = [0] * len(ring)
            for target, source in positions:
                new[target] = mono[source]
            terms[tuple(new)] = coeff
        return MultiPoly._raw(ring, terms)

    def substitute(self, bindings: Mapping[str, "MultiPoly"]) -> "MultiPoly":
        """
        Replace variables by polynomials. Unbound variables stay themselves and
        must exist in the ring of the bindings.
        """
        if not bindings:
            return self
        rings = {b.ring for b in bindings.values()}
        if len(rings) != 1:
            raise RingMismatchError(f"bindings live in different rings: {sorted(rings)}")
        target = rings.pop()
        for name in bindings:
            self.index(name)
        images = []
        for var in self._ring:
            if var in bindings:
                images.append(bindings[var])
            elif any(m[self._ring.index(var)] for m in self._terms):
                images.append(MultiPoly.variable(target, var))
            else:
                images.append(None)
        powers: List[Dict[int, MultiPoly]] = [{0: MultiPoly.constant(target, 1)} for _ in self._ring]

        def power_of(i: int, e: int) -> MultiPoly:
            cache = powers[i]
            if e not in cache:
                top = max(cache)
                value = cache[top]
                for k in range(top + 1, e + 1):
                    value = value * images[i]
                    cache[k] = value
            return cache[e]

        result = MultiPoly.zero(target)
        for mono, coeff in self._terms.items():
            term = MultiPoly.constant(target, coeff)
            for i, e in enumerate(mono):
                if e:
                    term = term * power_of(i, e)
            result = result + term
        return result

    # -- comparison and display -----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self._ring == other._ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_constant and self.constant_value == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._ring, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({format_poly(self)!r}, ring={self._ring})"


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_poly(poly: MultiPoly) -> str:
    """Canonical graded-lex text, re-parseable by the parser module."""
    if poly.is_zero:
        return "0"
    pieces = []
    for position, (mono, coeff) in enumerate(poly.sorted_terms()):
        magnitude = abs(coeff)
        factors = [name if e == 1 else f"{name}^{e}" for name, e in zip(poly.ring, mono) if e]
        if not factors:
            body = format_rational(magnitude)
        elif magnitude == 1:
            body = "*".join(factors)
        else:
            body = format_rational(magnitude) + "*" + "*".join(factors)
        if position == 0:
            pieces.append(("-" if coeff < 0 else "") + body)
        else:
            pieces.append((" - " if coeff < 0 else " + ") + body)
    return "".join(pieces)


def format_point(point: Sequence[Fraction]) -> str:
    return "(" + ",".join(format_rational(to_rational(v)) for v in point) + ")"


def point_height(point: Sequence[Fraction]) -> int:
    return max((max(abs(v.numerator), v.denominator) for v in point), default=0)


def point_sort_key(point: Sequence[Fraction]):
    """Height first, then lexicographic."""
    return (point_height(point), tuple(point))


@dataclass(frozen=True)
class PolyMap:
    """A polynomial self-map of the plane, f = (first, second)."""

    first: MultiPoly
    second: MultiPoly

    def __post_init__(self):
        if self.first.ring != self.second.ring:
            raise RingMismatchError(f"components live in {self.first.ring} and {self.second.ring}")
        if len(self.first.ring) != 2:
            raise ArityError(f"a plane map needs a two-variable ring, got {self.first.ring}")

    @classmethod
    def identity(cls, ring: Sequence[str] = XY) -> "PolyMap":
        return cls(MultiPoly.variable(ring, ring[0]), MultiPoly.variable(ring, ring[1]))

    @property
    def ring(self) -> Tuple[str, ...]:
        return self.first.ring

    @property
    def components(self) -> Tuple[MultiPoly, MultiPoly]:
        return (self.first, self.second)

    @property
    def degree(self) -> int:
        return max(self.first.total_degree, self.second.total_degree)

    def evaluate(self, point: Sequence[Scalar]) -> Point:
        return (self.first.evaluate(point), self.second.evaluate(point))

    def compose(self, inner: "PolyMap", settings: SolverSettings = DEFAULT_SETTINGS) -> "PolyMap":
        """self ∘ inner."""
        bindings = {self.ring[0]: inner.first, self.ring[1]: inner.second}
        return PolyMap(
            substitute(self.first, bindings, settings),
            substitute(self.second, bindings, settings),
        )

    def __str__(self):
        return f"f({','.join(self.ring)}) = ({self.first}, {self.second})"


def _check_cap(degree: int, settings: SolverSettings, what: str) -> None:
    if degree > settings.degree_cap:
        raise DegreeCapExceeded(degree, settings.degree_cap, what)


def poly_arith(op: str, a: MultiPoly, b: Union[MultiPoly, int], settings: SolverSettings = DEFAULT_SETTINGS) -> MultiPoly:
    """add / sub / mul / pow with ring and degree-cap checks."""
    _check_cap(a.total_degree, settings, op)
    if op == "pow":
        if not isinstance(b, int) or isinstance(b, bool) or b < 0:
            raise ValueError(f"pow exponent must be a nonnegative integer, got {b!r}")
        _check_cap(max(a.total_degree, 0) * b, settings, op)
        return a ** b
    if not isinstance(b, MultiPoly):
        raise TypeError(f"{op} expects a MultiPoly operand")
    if a.ring != b.ring:
        raise RingMismatchError(f"ring mismatch: {a.ring} vs {b.ring}")
    _check_cap(b.total_degree, settings, op)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        if not a.is_zero and not b.is_zero:
            _check_cap(a.total_degree + b.total_degree, settings, op)
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def evaluate(p: MultiPoly, point: Sequence[Scalar]) -> Fraction:
    return p.evaluate(point)


def substitute(p: MultiPoly, bindings: Mapping[str, MultiPoly], settings: SolverSettings = DEFAULT_SETTINGS) -> MultiPoly:
    bound = max((b.total_degree for b in bindings.values()), default=1)
    _check_cap(max(p.total_degree, 0) * max(bound, 1), settings, "substitute")
    return p.substitute(bindings)


def partial_derivative(p: MultiPoly, var: str) -> MultiPoly:
    return p.partial(var)


def jacobian_det(f: PolyMap) -> MultiPoly:
    x, y = f.ring
    p, q = f.components
    return partial_derivative(p, x) * partial_derivative(q, y) - partial_derivative(p, y) * partial_derivative(q, x)


def shear_map(f: PolyMap, lam: Scalar) -> PolyMap:
    """f ∘ s with s(x, y) = (x, y + lam*x)."""
    x, y = f.ring
    bindings = {y: MultiPoly.variable(f.ring, y) + MultiPoly.variable(f.ring, x).scale(lam)}
    return PolyMap(f.first.substitute(bindings), f.second.substitute(bindings))
