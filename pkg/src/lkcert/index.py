"""Index calculus of square matrices.

The index of a nonzero matrix is the largest ``i - j`` over its nonzero
entries: everything strictly below that subdiagonal vanishes and something on
it does not. The zero matrix has no such integer and gets ``BOTTOM``, which is
``-inf`` so it compares and adds like minus infinity.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .errors import DomainError
from .matrix import MatQ, mat_mul

BOTTOM = -math.inf


def index_of(A: MatQ):
    """Index of ``A`` as an int, or ``BOTTOM`` for the zero matrix."""
    best = BOTTOM
    n = A.dim
    for i in range(n):
        row = A.rows[i]
        for j in range(n):
            if row[j] != 0 and i - j > best:
                best = i - j
    return best


def index_to_json(value):
    return "bottom" if value == BOTTOM else int(value)


def is_upper_triangular(A: MatQ) -> bool:
    return index_of(A) <= 0


def check_submultiplicative(A: MatQ, B: MatQ) -> bool:
    """ind(AB) <= ind(A) + ind(B); vacuously true when either factor is zero."""
    ia, ib = index_of(A), index_of(B)
    if ia == BOTTOM or ib == BOTTOM:
        return True
    return index_of(mat_mul(A, B)) <= ia + ib


def product_trace_formula(As: Sequence[MatQ]) -> Fraction:
    """Trace of ``As[0] @ ... @ As[-1]`` as a single sum, for index-balanced lists.

    Requires the indices to sum to 0. Term ``k`` walks row ``k`` down the
    subdiagonal of each factor fixed by its index; entries addressed outside
    ``1..dim`` count as zero.
    """
    if not As:
        raise DomainError("product_trace_formula needs at least one matrix")
    dim = As[0].dim
    if any(M.dim != dim for M in As):
        raise DomainError("product_trace_formula: matrices of different dimensions")
    shifts = [index_of(M) for M in As]
    if sum(shifts) != 0:
        total = "bottom" if BOTTOM in shifts else sum(shifts)
        raise DomainError(f"product_trace_formula: index sum is {total}, not 0")
    total = Fraction(0)
    for k in range(1, dim + 1):
        row, term = k, Fraction(1)
        for M, shift in zip(As, shifts):
            col = row - shift
            term *= M.entry(row, col)
            if not term:
                break
            row = col
        total += term
    return total


def product_index_bound(As: Sequence[MatQ]):
    """Sum of the indices, an upper bound for the index of the product."""
    return sum(index_of(M) for M in As)
