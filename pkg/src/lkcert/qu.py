"""Quasi-unipotence and single-Jordan-block predicates over the rationals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .exact import (
    UniPoly,
    cyclotomic_exponent,
    poly_gcd,
    squarefree_part,
    x_pow_mod,
)
from .index import is_upper_triangular
from .matrix import (
    MatQ,
    char_poly,
    identity,
    jordan_unipotent,
    mat_mul,
    mat_pow,
    mat_vec,
    rank,
)


@dataclass(frozen=True)
class QuReport:
    """Outcome of :func:`is_quasi_unipotent`.

    ``witness_factor`` is the monic non-cyclotomic part of the squarefree
    characteristic polynomial; it is only set on a negative answer and need
    not be irreducible.
    """

    is_quasi_unipotent: bool
    unipotent_order: int | None = None
    witness_factor: UniPoly | None = None

    def __bool__(self):
        return self.is_quasi_unipotent

    def to_json(self) -> dict:
        return {
            "is_quasi_unipotent": self.is_quasi_unipotent,
            "unipotent_order": self.unipotent_order,
            "witness_factor": None if self.witness_factor is None else self.witness_factor.to_json(),
        }


def is_unipotent(A: MatQ) -> bool:
    return mat_pow(A - identity(A.dim), A.dim).is_zero()


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def is_quasi_unipotent(A: MatQ) -> QuReport:
    """Decide whether every eigenvalue of ``A`` is a root of unity.

    With q the squarefree part of the characteristic polynomial and E the lcm
    of all n with phi(n) <= dim, the answer is yes iff q divides x^E - 1.
    """
    if not isinstance(A, MatQ):
        raise DomainError("is_quasi_unipotent expects a square MatQ")
    q = squarefree_part(char_poly(A))
    exponent = cyclotomic_exponent(A.dim)
    residue = x_pow_mod(exponent, q)
    if residue != UniPoly([1]):
        cyclotomic_part = poly_gcd(q, UniPoly.monomial(exponent) - 1)
        return QuReport(False, witness_factor=(q // cyclotomic_part).monic())
    # least d with q | x^d - 1 is the lcm of the eigenvalue orders
    for d in _divisors(exponent):
        if x_pow_mod(d, q) == UniPoly([1]):
            if not is_unipotent(mat_pow(A, d)):
                raise AssertionError("eigenvalue orders divide d but A^d is not unipotent")
            return QuReport(True, unipotent_order=d)
    raise AssertionError("unreachable: exponent itself works")


def single_block_eigenvalue(B: MatQ) -> Fraction | None:
    """The eigenvalue of ``B`` if it is a single Jordan block with rational eigenvalue, else None."""
    n = B.dim
    cp = char_poly(B)
    lam = -cp.coeff(n - 1) / n
    if cp != UniPoly([-lam, 1]) ** n:
        return None
    if rank(B - identity(n).scale(lam)) != n - 1:
        return None
    return lam


def is_single_jordan_block(B: MatQ) -> tuple[bool, Fraction | None]:
    """(True, lambda) when B is one Jordan block with eigenvalue +-1, else (False, None).

    The only rational roots of unity are +-1, and a repeated irrational
    eigenvalue cannot fill a single block of a rational matrix.
    """
    lam = single_block_eigenvalue(B)
    if lam is None or lam not in (1, -1):
        return False, None
    return True, lam


def jordan_basis_single_block(B: MatQ) -> MatQ:
    """P with P^{-1} B P = I + N for a unipotent single block ``B``.

    The columns are (B-I)^m w, ..., (B-I) w, w for the first standard vector
    w with (B-I)^m w != 0, so the eigenvector of B comes first.
    """
    ok, lam = is_single_jordan_block(B)
    if not ok or lam != 1:
        raise DomainError("jordan_basis_single_block needs a unipotent single Jordan block")
    n = B.dim
    M = B - identity(n)
    top = mat_pow(M, n - 1)
    j = next(j for j in range(n) if any(top.rows[i][j] for i in range(n)))
    w = tuple(Fraction(int(i == j)) for i in range(n))
    chain = [w]
    for _ in range(n - 1):
        chain.append(mat_vec(M, chain[-1]))
    return MatQ.from_columns(chain[::-1])


def centralizer_is_upper_triangular_check(M: MatQ, J: MatQ) -> bool:
    """Whether a matrix commuting with J = I + N is upper triangular (always, by the theory)."""
    if J != jordan_unipotent(J.dim):
        raise DomainError("J must be the canonical block I + N")
    if mat_mul(M, J) != mat_mul(J, M):
        raise DomainError("M does not commute with J")
    return is_upper_triangular(M)


def companion(p: UniPoly) -> MatQ:
    """Companion matrix of a monic polynomial (subdiagonal ones, last column -coeffs)."""
    p = p.monic()
    n = p.degree
    if n < 1:
        raise DomainError("companion matrix needs degree >= 1")
    rows = [[0] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = 1
    for i in range(n):
        rows[i][n - 1] = -p.coeff(i)
    return MatQ(rows)
