"""
Univariate polynomials over the rationals.

Dense coefficient lists (index = power) do the work; the MultiPoly wrappers
at the bottom check that the input really is univariate.
"""
import logging
from fractions import Fraction
from math import gcd, lcm
from typing import List, Optional, Sequence, Tuple

from ..algebra import MultiPoly, to_rational
from ..errors import MultivariateInputError, ZeroPolynomialError
from ..settings import DEFAULT_SETTINGS, SolverSettings

logger = logging.getLogger(__name__)

Coeffs = List[Fraction]


def trim(coeffs: Sequence) -> Coeffs:
    out = [to_rational(c) for c in coeffs]
    while out and not out[-1]:
        out.pop()
    return out


def degree(coeffs: Sequence) -> int:
    return len(trim(coeffs)) - 1


def monic(coeffs: Sequence) -> Coeffs:
    coeffs = trim(coeffs)
    if not coeffs:
        return []
    lead = coeffs[-1]
    return [c / lead for c in coeffs]


def derivative(coeffs: Sequence) -> Coeffs:
    coeffs = trim(coeffs)
    return trim([c * i for i, c in enumerate(coeffs)][1:])


def evaluate(coeffs: Sequence, value) -> Fraction:
    value = to_rational(value)
    total = Fraction(0)
    for c in reversed(trim(coeffs)):
        total = total * value + c
    return total


def divmod_poly(a: Sequence, b: Sequence) -> Tuple[Coeffs, Coeffs]:
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    remainder = list(a)
    quotient = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(remainder) >= len(b) and remainder:
        shift = len(remainder) - len(b)
        factor = remainder[-1] / lead
        quotient[shift] = factor
        for i, c in enumerate(b):
            remainder[shift + i] -= factor * c
        remainder = trim(remainder)
    return trim(quotient), remainder


def _primitive_ints(coeffs: Sequence[Fraction]) -> List[int]:
    """Scale to coprime integers with a positive leading coefficient."""
    coeffs = trim(coeffs)
    if not coeffs:
        return []
    denom = lcm(*(c.denominator for c in coeffs))
    ints = [int(c * denom) for c in coeffs]
    content = gcd(*ints)
    if ints[-1] < 0:
        content = -content
    return [i // content for i in ints]


def _pseudo_remainder(a: List[int], b: List[int]) -> List[int]:
    remainder = list(a)
    lead = b[-1]
    while len(remainder) >= len(b):
        shift = len(remainder) - len(b)
        top = remainder[-1]
        remainder = [lead * c for c in remainder]
        for i, c in enumerate(b):
            remainder[shift + i] -= top * c
        while remainder and remainder[-1] == 0:
            remainder.pop()
    return remainder


def gcd_poly(a: Sequence, b: Sequence) -> Coeffs:
    """Monic gcd by a primitive remainder sequence over the integers."""
    a, b = _primitive_ints(a), _primitive_ints(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _pseudo_remainder(a, b)
        a, b = b, _primitive_ints(r)
    return monic(a)


def squarefree(coeffs: Sequence) -> Coeffs:
    coeffs = trim(coeffs)
    if not coeffs:
        raise ZeroPolynomialError("squarefree part of the zero polynomial")
    if len(coeffs) <= 2:
        return monic(coeffs)
    quotient, _ = divmod_poly(coeffs, gcd_poly(coeffs, derivative(coeffs)))
    return monic(quotient)


def distinct_root_count(coeffs: Sequence) -> int:
    return degree(squarefree(coeffs))


def _divisors(n: int, budget: int) -> Optional[List[int]]:
    """Positive divisors of n > 0, or None if factoring needs more than `budget` steps."""
    factors = {}
    rest = n
    p = 2
    steps = 0
    while p * p <= rest:
        steps += 1
        if steps > budget:
            return None
        while rest % p == 0:
            factors[p] = factors.get(p, 0) + 1
            rest //= p
        p += 1 if p == 2 else 2
    if rest > 1:
        factors[rest] = factors.get(rest, 0) + 1
    divisors = [1]
    for prime, power in factors.items():
        divisors = [d * prime ** e for d in divisors for e in range(power + 1)]
    return sorted(divisors)


def _sturm_sequence(coeffs: Sequence) -> List[Coeffs]:
    sequence = [trim(coeffs), derivative(coeffs)]
    while sequence[-1]:
        _, remainder = divmod_poly(sequence[-2], sequence[-1])
        if not remainder:
            break
        sequence.append([-c for c in remainder])
    return sequence


def _sign_changes(sequence: Sequence[Coeffs], value: Fraction) -> int:
    signs = [v > 0 for v in (evaluate(p, value) for p in sequence) if v]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


class _Budget:
    def __init__(self, cap: int):
        self.left = cap

    def spend(self) -> bool:
        self.left -= 1
        return self.left >= 0


def _isolated_rational_roots(ints: List[int], budget: _Budget) -> Tuple[List[Fraction], bool]:
    """
    Rational roots of a squarefree integer polynomial without factoring its
    coefficients: isolate every real root by Sturm bisection, shrink each
    interval below 1/(2 lead^2) and test the one fraction with denominator
    <= lead that can lie inside.
    """
    sequence = _sturm_sequence([Fraction(c) for c in ints])
    lead = abs(ints[-1])
    bound = 1 + Fraction(max(abs(c) for c in ints[:-1]), lead)

    def count(lo: Fraction, hi: Fraction) -> int:
        return _sign_changes(sequence, lo) - _sign_changes(sequence, hi)

    isolated = []
    stack = [(-bound, bound, count(-bound, bound))]
    while stack:
        lo, hi, n = stack.pop()
        if n == 1:
            isolated.append((lo, hi))
        elif n > 1:
            if not budget.spend():
                return [], False
            mid = (lo + hi) / 2
            left = count(lo, mid)
            stack.extend([(lo, mid, left), (mid, hi, n - left)])

    tolerance = Fraction(1, 2 * lead * lead)
    roots = []
    for lo, hi in isolated:
        while hi - lo >= tolerance:
            if not budget.spend():
                return sorted(roots), False
            mid = (lo + hi) / 2
            if count(lo, mid):
                hi = mid
            else:
                lo = mid
        candidate = ((lo + hi) / 2).limit_denominator(lead)
        if lo < candidate <= hi and evaluate(ints, candidate) == 0:
            roots.append(candidate)
    return sorted(roots), True


def rational_roots(coeffs: Sequence, cap: int = DEFAULT_SETTINGS.root_candidate_cap) -> Tuple[List[Fraction], bool]:
    """
    Distinct rational roots by the rational root theorem.

    Candidates p/q come from the divisors of the constant and leading
    coefficients; when those are too large to factor within `cap` steps the
    roots are isolated with a Sturm sequence instead. Returns (sorted roots,
    complete); complete is False only when `cap` ran out.
    """
    coeffs = trim(coeffs)
    if not coeffs:
        raise ZeroPolynomialError("roots of the zero polynomial")
    ints = _primitive_ints(squarefree(coeffs))
    roots: List[Fraction] = []
    if ints[0] == 0:
        roots.append(Fraction(0))
        ints = ints[1:]
    if len(ints) <= 1:
        return sorted(roots), True
    if len(ints) == 2:
        roots.append(Fraction(-ints[0], ints[1]))
        return sorted(roots), True

    numerators = _divisors(abs(ints[0]), cap)
    denominators = _divisors(abs(ints[-1]), cap)
    if numerators is None or denominators is None or 2 * len(numerators) * len(denominators) > cap:
        logger.debug("coefficients too large to factor within %d steps; isolating real roots", cap)
        found, complete = _isolated_rational_roots(ints, _Budget(cap))
        if not complete:
            logger.warning("rational root search truncated after %d bisection steps", cap)
        return sorted(roots + found), complete

    n = len(ints) - 1
    for q in denominators:
        for p in numerators:
            if gcd(p, q) != 1:
                continue
            for signed in (p, -p):
                if sum(c * signed ** i * q ** (n - i) for i, c in enumerate(ints)) == 0:
                    roots.append(Fraction(signed, q))
    return sorted(roots), True


# -- MultiPoly front ends -----------------------------------------------------


def univariate_coeffs(p: MultiPoly, var: Optional[str] = None) -> Tuple[Optional[str], Coeffs]:
    """Dense coefficients of a polynomial in at most one variable."""
    used = p.variables()
    if len(used) > 1 or (var is not None and used and used[0] != var):
        raise MultivariateInputError(f"expected a univariate polynomial, got {p} in {used}")
    var = var or (used[0] if used else None)
    if var is None:
        return None, trim([p.constant_value]) if not p.is_zero else []
    i = p.index(var)
    coeffs = [Fraction(0)] * (max(p.degree_in(var), 0) + 1)
    for mono, c in p.terms.items():
        coeffs[mono[i]] = c
    return var, trim(coeffs)


def _common_variable(*polys: MultiPoly) -> Optional[str]:
    names = {v for p in polys for v in p.variables()}
    if len(names) > 1:
        raise MultivariateInputError(f"polynomials use different variables {sorted(names)}")
    return names.pop() if names else None


def _wrap(coeffs: Coeffs, var: Optional[str], ring) -> MultiPoly:
    if var is None:
        return MultiPoly.constant(ring, coeffs[0] if coeffs else 0)
    return MultiPoly.from_univariate(coeffs, var, ring)


def gcd_univariate(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Monic gcd of two polynomials in the same single variable; gcd(0, 0) = 0."""
    if a.ring != b.ring:
        b = b.to_ring(a.ring)
    var = _common_variable(a, b)
    _, ca = univariate_coeffs(a, var)
    _, cb = univariate_coeffs(b, var)
    return _wrap(gcd_poly(ca, cb), var, a.ring)


def gcd_many(polys: Sequence[MultiPoly], ring) -> MultiPoly:
    result = MultiPoly.zero(ring)
    for p in polys:
        result = gcd_univariate(result, p)
        if result == 1:
            break
    return result


def squarefree_part(p: MultiPoly) -> MultiPoly:
    if p.is_zero:
        raise ZeroPolynomialError("squarefree part of the zero polynomial")
    var, coeffs = univariate_coeffs(p)
    return _wrap(squarefree(coeffs), var, p.ring)


def rational_roots_of(p: MultiPoly, settings: SolverSettings = DEFAULT_SETTINGS) -> Tuple[List[Fraction], bool]:
    _, coeffs = univariate_coeffs(p)
    return rational_roots(coeffs, settings.root_candidate_cap)
