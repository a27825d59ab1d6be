"""Exact determinants: Bareiss over integral backends, plain elimination over fields."""

from __future__ import annotations

from fractions import Fraction

from .fields import FFElem
from .funcfield import Poly, RatFunc


def det_bareiss(matrix):
    """Fraction-free determinant for entries in an integral domain (int, Poly).

    Divisions are exact at every step, so no fractions are ever formed.
    """
    n = len(matrix)
    if n == 0:
        return 1
    m = [list(row) for row in matrix]
    sample = m[0][0]
    if isinstance(sample, Poly):
        one = Poly.one(sample.field)
        exact_div = lambda a, b: a.divmod(b)[0]
        is_zero = lambda a: a.is_zero()
    else:
        one = 1
        exact_div = lambda a, b: a // b
        is_zero = lambda a: a == 0
    sign = 1
    prev = one
    for k in range(n - 1):
        if is_zero(m[k][k]):
            for r in range(k + 1, n):
                if not is_zero(m[r][k]):
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return m[0][0] - m[0][0] if isinstance(sample, Poly) else 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = exact_div(num, prev)
        prev = m[k][k]
    result = m[n - 1][n - 1]
    if sign < 0:
        result = -result
    return result


def det_gauss(matrix):
    """Determinant by Gaussian elimination over a field (Fraction, FFElem, RatFunc)."""
    n = len(matrix)
    if n == 0:
        return 1
    m = [list(row) for row in matrix]
    sample = m[0][0]
    if isinstance(sample, RatFunc):
        is_zero = lambda a: a.is_zero()
    elif isinstance(sample, FFElem):
        is_zero = lambda a: a.is_zero()
    else:
        is_zero = lambda a: a == 0
    det = None
    sign = 1
    for k in range(n):
        pivot_row = None
        for r in range(k, n):
            if not is_zero(m[r][k]):
                pivot_row = r
                break
        if pivot_row is None:
            return sample - sample
        if pivot_row != k:
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        pivot = m[k][k]
        det = pivot if det is None else det * pivot
        for i in range(k + 1, n):
            if is_zero(m[i][k]):
                continue
            factor = m[i][k] / pivot
            for j in range(k, n):
                m[i][j] = m[i][j] - factor * m[k][j]
    if sign < 0:
        det = -det
    return det


def det(matrix):
    """Exact determinant, dispatching on the entry type."""
    n = len(matrix)
    if n == 0:
        return 1
    for row in matrix:
        if len(row) != n:
            raise ValueError("determinant of a non-square matrix")
    sample = matrix[0][0]
    if isinstance(sample, (Poly,)) or (isinstance(sample, int) and not isinstance(sample, bool)):
        return det_bareiss(matrix)
    if isinstance(sample, (Fraction, FFElem, RatFunc)):
        return det_gauss(matrix)
    raise TypeError(f"unsupported entry type {type(sample).__name__}")
