"""Dense exact square matrices over the rationals.

Entries are stored 0-based; every public index argument (minors, elementary
matrices, certificates) is 1-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Sequence

from .errors import DomainError
from .exact import UniPoly, format_rat, rat

Vector = tuple  # tuple of Fraction


class MatQ:
    """Immutable square matrix of Fractions."""

    __slots__ = ("dim", "rows")

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(rat(x) for x in row) for row in rows)
        dim = len(rows)
        if dim == 0:
            raise DomainError("matrix must have dimension >= 1")
        for i, row in enumerate(rows):
            if len(row) != dim:
                raise DomainError(f"row {i + 1} has length {len(row)}, expected {dim}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("MatQ is immutable")

    @classmethod
    def _trusted(cls, rows: tuple) -> MatQ:
        # rows already a square tuple of tuples of Fraction
        obj = object.__new__(cls)
        object.__setattr__(obj, "dim", len(rows))
        object.__setattr__(obj, "rows", rows)
        return obj

    @classmethod
    def identity(cls, dim: int) -> MatQ:
        one, zero = Fraction(1), Fraction(0)
        return cls._trusted(tuple(tuple(one if i == j else zero for j in range(dim)) for i in range(dim)))

    @classmethod
    def zero(cls, dim: int) -> MatQ:
        return cls._trusted(tuple((Fraction(0),) * dim for _ in range(dim)))

    @classmethod
    def diag(cls, values: Sequence) -> MatQ:
        vals = [rat(v) for v in values]
        n = len(vals)
        return cls([[vals[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> MatQ:
        n = len(columns)
        return cls([[columns[j][i] for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        """0-based ``A[i, j]``."""
        i, j = ij
        return self.rows[i][j]

    def entry(self, i: int, j: int) -> Fraction:
        """1-based entry; indices outside ``1..dim`` read as zero."""
        if 1 <= i <= self.dim and 1 <= j <= self.dim:
            return self.rows[i - 1][j - 1]
        return Fraction(0)

    def column(self, j: int) -> Vector:
        """0-based column."""
        return tuple(row[j] for row in self.rows)

    def transpose(self) -> MatQ:
        return MatQ._trusted(tuple(zip(*self.rows)))

    def __eq__(self, other):
        if not isinstance(other, MatQ):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = ", ".join("[" + ", ".join(format_rat(x) for x in row) + "]" for row in self.rows)
        return f"MatQ([{body}])"

    def _check(self, other: MatQ):
        if not isinstance(other, MatQ):
            raise TypeError("expected MatQ")
        if other.dim != self.dim:
            raise DomainError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: MatQ) -> MatQ:
        self._check(other)
        return MatQ._trusted(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other: MatQ) -> MatQ:
        self._check(other)
        return MatQ._trusted(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __neg__(self) -> MatQ:
        return MatQ._trusted(tuple(tuple(-a for a in r) for r in self.rows))

    def scale(self, c) -> MatQ:
        c = rat(c)
        return MatQ._trusted(tuple(tuple(c * a for a in r) for r in self.rows))

    def __matmul__(self, other):
        if isinstance(other, MatQ):
            return mat_mul(self, other)
        return mat_vec(self, other)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.rows for x in row)

    def to_json(self) -> dict:
        return {"dim": self.dim, "entries": [[format_rat(x) for x in row] for row in self.rows]}

    @classmethod
    def from_json(cls, data) -> MatQ:
        """Parse ``{"dim": d, "entries": [[...], ...]}``.

        Errors name the offending position, e.g. ``entries[1][0]``.
        """
        if not isinstance(data, dict):
            raise DomainError("matrix JSON must be an object with 'dim' and 'entries'")
        if "entries" not in data:
            raise DomainError("matrix JSON: missing 'entries'")
        entries = data["entries"]
        if not isinstance(entries, list) or not entries:
            raise DomainError("matrix JSON: 'entries' must be a non-empty list of rows")
        rows = []
        for i, row in enumerate(entries):
            if not isinstance(row, list):
                raise DomainError(f"matrix JSON: entries[{i}] is not a list")
            parsed = []
            for j, x in enumerate(row):
                if isinstance(x, float):
                    raise DomainError(f"matrix JSON: entries[{i}][{j}] is a float; use a rational string")
                try:
                    parsed.append(rat(x))
                except (TypeError, ValueError, ZeroDivisionError) as exc:
                    raise DomainError(f"matrix JSON: entries[{i}][{j}]: {exc}") from None
            rows.append(parsed)
        dim = data.get("dim", len(rows))
        if not isinstance(dim, int) or isinstance(dim, bool) or dim != len(rows):
            raise DomainError(f"matrix JSON: 'dim' is {dim!r} but there are {len(rows)} rows")
        for i, row in enumerate(rows):
            if len(row) != dim:
                raise DomainError(f"matrix JSON: entries[{i}] has {len(row)} entries, expected {dim}")
        return cls(rows)


@dataclass(frozen=True)
class MinorSpec:
    """1-based strictly increasing row indices ``I`` and column indices ``J``."""

    I: tuple
    J: tuple

    def __post_init__(self):
        object.__setattr__(self, "I", tuple(self.I))
        object.__setattr__(self, "J", tuple(self.J))

    def validate(self, dim: int) -> None:
        if len(self.I) != len(self.J):
            raise DomainError(f"minor: |I|={len(self.I)} differs from |J|={len(self.J)}")
        for name, idx in (("I", self.I), ("J", self.J)):
            if any(b <= a for a, b in zip(idx, idx[1:])):
                raise DomainError(f"minor: {name}={list(idx)} is not strictly increasing")
            if any(not 1 <= t <= dim for t in idx):
                raise DomainError(f"minor: {name}={list(idx)} has an index outside 1..{dim}")

    def to_json(self) -> dict:
        return {"I": list(self.I), "J": list(self.J)}


def identity(dim: int) -> MatQ:
    return MatQ.identity(dim)


def nilpotent_block(dim: int) -> MatQ:
    """N: ones on the superdiagonal, zero elsewhere."""
    return MatQ([[1 if j == i + 1 else 0 for j in range(dim)] for i in range(dim)])


def jordan_unipotent(dim: int) -> MatQ:
    """I + N, the canonical unipotent single Jordan block."""
    return MatQ([[1 if j in (i, i + 1) else 0 for j in range(dim)] for i in range(dim)])


def elementary(dim: int, i: int, j: int, c=1) -> MatQ:
    """c * E_{i,j} (1-based)."""
    return MatQ([[c if (r, s) == (i - 1, j - 1) else 0 for s in range(dim)] for r in range(dim)])


def _integer_form(M: MatQ) -> tuple[int, list[list[int]]]:
    """(d, d*M) with d the lcm of the denominators, so d*M is an integer matrix."""
    d = 1
    for row in M.rows:
        for x in row:
            d = d * x.denominator // math.gcd(d, x.denominator)
    return d, [[x.numerator * (d // x.denominator) for x in row] for row in M.rows]


def mat_mul(A: MatQ, B: MatQ) -> MatQ:
    if A.dim != B.dim:
        raise DomainError(f"dimension mismatch: {A.dim} vs {B.dim}")
    # integer products, one division per entry
    da, ai = _integer_form(A)
    db, bi = _integer_form(B)
    d = da * db
    cols = list(zip(*bi))
    out = []
    for row in ai:
        nz = [(k, a) for k, a in enumerate(row) if a]
        out.append(tuple(Fraction(sum(a * col[k] for k, a in nz), d) for col in cols))
    return MatQ._trusted(tuple(out))


def mat_vec(A: MatQ, v: Sequence) -> Vector:
    if len(v) != A.dim:
        raise DomainError("vector length does not match matrix dimension")
    v = [rat(x) for x in v]
    return tuple(sum((a * x for a, x in zip(row, v)), Fraction(0)) for row in A.rows)


def mat_prod(mats: Sequence[MatQ]) -> MatQ:
    """Ordered product; raises on an empty list since the dimension is unknown."""
    if not mats:
        raise DomainError("empty product has no dimension")
    out = mats[0]
    for M in mats[1:]:
        out = mat_mul(out, M)
    return out


def mat_pow(A: MatQ, k: int) -> MatQ:
    if k < 0:
        raise DomainError("mat_pow needs k >= 0")
    result = MatQ.identity(A.dim)
    base = A
    while k:
        if k & 1:
            result = mat_mul(result, base)
        k >>= 1
        if k:
            base = mat_mul(base, base)
    return result


def trace(A: MatQ) -> Fraction:
    return sum((A.rows[i][i] for i in range(A.dim)), Fraction(0))


def _integer_rows(A: MatQ) -> tuple[list[list[int]], Fraction]:
    """Scale each row to integers; returns (rows, product of the scale factors)."""
    rows, scale = [], Fraction(1)
    for row in A.rows:
        d = math.lcm(*(x.denominator for x in row))
        rows.append([int(x * d) for x in row])
        scale *= d
    return rows, scale


def det(A: MatQ) -> Fraction:
    """Determinant by Bareiss fraction-free elimination on row-scaled integers."""
    M, scale = _integer_rows(A)
    n = len(M)
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = M[k][k]
        for i in range(k + 1, n):
            Mi, Mk = M[i], M[k]
            mik = Mi[k]
            for j in range(k + 1, n):
                Mi[j] = (Mi[j] * pivot - mik * Mk[j]) // prev
            Mi[k] = 0
        prev = pivot
    return Fraction(sign * M[n - 1][n - 1]) / scale


def det_cofactor(A: MatQ) -> Fraction:
    """Leibniz expansion over permutations; an independent oracle for small dims."""
    n = A.dim
    total = Fraction(0)
    for perm in permutations(range(n)):
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = Fraction(-1 if inversions % 2 else 1)
        for i, j in enumerate(perm):
            term *= A.rows[i][j]
            if not term:
                break
        total += term
    return total


def char_poly(A: MatQ) -> UniPoly:
    """det(xI - A) by the Faddeev-LeVerrier recurrence."""
    n = A.dim
    I = MatQ.identity(n)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    M = MatQ.zero(n)
    for k in range(1, n + 1):
        M = mat_mul(A, M) + I.scale(coeffs[n - k + 1])
        coeffs[n - k] = -trace(mat_mul(A, M)) / k
    return UniPoly(coeffs)


def poly_at_matrix(p: UniPoly, A: MatQ) -> MatQ:
    """Horner evaluation of ``p`` at a matrix."""
    I = MatQ.identity(A.dim)
    acc = MatQ.zero(A.dim)
    for c in reversed(p.coeffs):
        acc = mat_mul(acc, A) + I.scale(c)
    return acc


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form of a (possibly rectangular) list of rows; returns (rows, pivot columns)."""
    M = [[rat(x) for x in row] for row in rows]
    if not M:
        return M, []
    ncols = len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        pv = M[r][c]
        M[r] = [x / pv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rank_of_rows(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def rank(A: MatQ) -> int:
    return rank_of_rows(A.rows)


def kernel_basis(A: MatQ) -> list[Vector]:
    """Basis of {v : A v = 0}, one vector per free column."""
    R, pivots = rref(A.rows)
    n = A.dim
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row_idx, pc in enumerate(pivots):
            v[pc] = -R[row_idx][f]
        basis.append(tuple(v))
    return basis


def inverse(A: MatQ) -> MatQ:
    n = A.dim
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A.rows)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise DomainError("matrix is singular")
    return MatQ(row[n:] for row in R)


def conjugate(A: MatQ, P: MatQ, P_inv: MatQ | None = None) -> MatQ:
    """P^{-1} A P."""
    if P_inv is None:
        P_inv = inverse(P)
    return mat_mul(mat_mul(P_inv, A), P)


def submatrix(A: MatQ, s: MinorSpec) -> MatQ:
    s.validate(A.dim)
    return MatQ._trusted(tuple(tuple(A.rows[i - 1][j - 1] for j in s.J) for i in s.I))


def minor_det(A: MatQ, s: MinorSpec) -> Fraction:
    s.validate(A.dim)
    if not s.I:
        return Fraction(1)
    return det(submatrix(A, s))


def all_minor_specs(dim: int, size: int | None = None):
    """Every square MinorSpec in order (size, I, J), each lexicographic."""
    sizes = range(1, dim + 1) if size is None else (size,)
    for k in sizes:
        subsets = list(combinations(range(1, dim + 1), k))
        for I in subsets:
            for J in subsets:
                yield MinorSpec(I, J)


def vector_to_json(v: Sequence) -> list[str]:
    return [format_rat(x) for x in v]
