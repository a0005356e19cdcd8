"""
Sylvester resultants and principal subresultant coefficients.

Sign convention: the determinant of the Sylvester matrix with the rows of `a`
first, so Res(a, b) = lc(a)^deg(b) * prod b(r) over the roots r of a.
"""
import logging
from typing import List

import numpy as np

from ..algebra import MultiPoly
from ..errors import DegreeCapExceeded, NotApplicableError
from ..settings import DEFAULT_SETTINGS, SolverSettings

logger = logging.getLogger(__name__)


def _descending_coeffs(p: MultiPoly, var: str) -> List[MultiPoly]:
    degree = p.degree_in(var)
    parts = p.coefficients_in(var)
    zero = MultiPoly.zero(p.ring)
    return [parts.get(power, zero) for power in range(degree, -1, -1)]


def subresultant_matrix(a: MultiPoly, b: MultiPoly, var: str, j: int = 0) -> np.ndarray:
    """
    Rows x^(n-j-1)*a .. a, x^(m-j-1)*b .. b as coefficient vectors of length
    m+n-j; j = 0 gives the Sylvester matrix.
    """
    m, n = a.degree_in(var), b.degree_in(var)
    width = m + n - j
    matrix = np.empty((m + n - 2 * j, width), dtype=object)
    matrix.fill(MultiPoly.zero(a.ring))
    row = 0
    for coeffs, shifts in ((_descending_coeffs(a, var), n - j), (_descending_coeffs(b, var), m - j)):
        for shift in range(shifts):
            # leading coefficient of the shifted row sits in column `shift`
            for offset, c in enumerate(coeffs):
                matrix[row, shift + offset] = c
            row += 1
    return matrix


def bareiss_determinant(matrix: np.ndarray, ring) -> MultiPoly:
    """Fraction-free Gaussian elimination; every division is exact."""
    size = matrix.shape[0]
    if size == 0:
        return MultiPoly.constant(ring, 1)
    work = matrix.copy()
    sign = 1
    previous = MultiPoly.constant(ring, 1)
    for k in range(size - 1):
        if work[k, k].is_zero:
            pivot = next((i for i in range(k + 1, size) if not work[i, k].is_zero), None)
            if pivot is None:
                return MultiPoly.zero(ring)
            work[[k, pivot]] = work[[pivot, k]]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                work[i, j] = (work[i, j] * work[k, k] - work[i, k] * work[k, j]).exact_divide(previous)
        previous = work[k, k]
    det = work[size - 1, size - 1]
    return det if sign > 0 else -det


def _check(a: MultiPoly, b: MultiPoly, var: str, settings: SolverSettings) -> None:
    a.index(var)
    for p in (a, b):
        if p.total_degree > settings.degree_cap:
            raise DegreeCapExceeded(p.total_degree, settings.degree_cap, "resultant")
    if a.degree_in(var) <= 0 and b.degree_in(var) <= 0:
        raise NotApplicableError(f"variable {var} occurs in neither {a} nor {b}")


def resultant(a: MultiPoly, b: MultiPoly, var: str, settings: SolverSettings = DEFAULT_SETTINGS) -> MultiPoly:
    if a.ring != b.ring:
        b = b.to_ring(a.ring)
    _check(a, b, var, settings)
    if a.is_zero or b.is_zero:
        return MultiPoly.zero(a.ring)
    matrix = subresultant_matrix(a, b, var)
    logger.debug("resultant in %s: %dx%d Sylvester matrix", var, *matrix.shape)
    return bareiss_determinant(matrix, a.ring)


def principal_subresultant_coefficient(
    a: MultiPoly, b: MultiPoly, var: str, j: int, settings: SolverSettings = DEFAULT_SETTINGS
) -> MultiPoly:
    """
    psc_j: the leading square block of the j-th subresultant matrix. After
    specializing the other variables (leading coefficients nonzero), the gcd
    in `var` has degree >= j + 1 exactly when psc_0..psc_j all vanish.
    """
    if a.ring != b.ring:
        b = b.to_ring(a.ring)
    _check(a, b, var, settings)
    m, n = a.degree_in(var), b.degree_in(var)
    if not 0 <= j < min(m, n):
        raise NotApplicableError(f"subresultant index {j} out of range for degrees {m}, {n}")
    matrix = subresultant_matrix(a, b, var, j)
    size = m + n - 2 * j
    return bareiss_determinant(matrix[:, :size], a.ring)
