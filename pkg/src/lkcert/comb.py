"""The p_k polynomials, binomial matrices, Pascal matrices and minor positivity."""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import DomainError, ResourceError
from .exact import binom, inv_factorial, rat
from .matrix import (
    MatQ,
    MinorSpec,
    all_minor_specs,
    elementary,
    identity,
    mat_mul,
    mat_pow,
    mat_prod,
    minor_det,
    trace,
)

DEFAULT_TNN_CAP = int(os.environ.get("LKCERT_TNN_CAP", "6"))


@dataclass(frozen=True)
class PkInstance:
    """Index ``r``, size ``m + 1`` and the subdiagonal values ``x_1..x_{m+1}``."""

    r: int
    m: int
    x: tuple

    def __post_init__(self):
        if self.r < 0 or self.m < 0:
            raise DomainError("PkInstance needs r >= 0 and m >= 0")
        x = tuple(rat(v) for v in self.x)
        if len(x) != self.m + 1:
            raise DomainError(f"PkInstance: expected {self.m + 1} values, got {len(x)}")
        object.__setattr__(self, "x", x)


def pk_direct(inst: PkInstance, k: int) -> Fraction:
    """Cyclic sum over (i_1..i_k) in {1..m+1}^k of
    x_{i_1}...x_{i_k} / ((i_2-i_1+r)! ... (i_1-i_k+r)!)."""
    if k < 1:
        raise DomainError("k must be positive")
    r, x = inst.r, inst.x
    size = len(x)
    w = [[inv_factorial(j - i + r) for j in range(size)] for i in range(size)]
    # depth-first over index tuples, dropping prefixes whose product is already 0
    total = Fraction(0)

    def walk(first: int, last: int, depth: int, acc: Fraction) -> None:
        nonlocal total
        if depth == k:
            total += acc * w[last][first]
            return
        for nxt in range(size):
            step = w[last][nxt] * x[nxt]
            if step:
                walk(first, nxt, depth + 1, acc * step)

    for i in range(size):
        if x[i]:
            walk(i, i, 1, x[i])
    return total


def matB(r: int, m: int) -> MatQ:
    """b_{ij} = 1/(i - j + r)!, with 1/t! = 0 for t < 0."""
    return MatQ([[inv_factorial(i - j + r) for j in range(m + 1)] for i in range(m + 1)])


def matA_from_x(inst: PkInstance) -> MatQ:
    """diag(x) * B(r, m).

    Same traces of powers as diag(y) B diag(y) with x = y^2, by cyclicity of
    the trace, and no square roots needed.
    """
    B = matB(inst.r, inst.m)
    return MatQ([[xi * b for b in row] for xi, row in zip(inst.x, B.rows)])


def pk_via_trace(inst: PkInstance, k: int) -> Fraction:
    if k < 1:
        raise DomainError("k must be positive")
    return trace(mat_pow(matA_from_x(inst), k))


def theorem_pk_check(inst: PkInstance) -> tuple[bool, int | None]:
    """Return (True, None) if p_1..p_{m+1} all vanish, else (False, least k with p_k != 0).

    Vanishing of those power sums makes diag(x) B nilpotent, and then x = 0
    must follow; that conclusion is checked, not assumed.
    """
    A = matA_from_x(inst)
    power = A
    for k in range(1, inst.m + 2):
        if k > 1:
            power = mat_mul(power, A)
        if trace(power) != 0:
            return False, k
    if any(inst.x):
        raise AssertionError(f"p_1..p_{inst.m + 1} vanish for nonzero x={inst.x}")
    return True, None


def matM(r: int, m: int) -> MatQ:
    """f_{ij} = C(i + r, j) for i, j = 1..m+1."""
    return MatQ([[binom(i + r, j) for j in range(1, m + 2)] for i in range(1, m + 2)])


def pascal_L(n: int) -> MatQ:
    """(L_n)_{ij} = C(i - 1, j - 1), lower triangular."""
    if n < 1:
        raise DomainError("pascal_L needs n >= 1")
    return MatQ([[binom(i, j) for j in range(n)] for i in range(n)])


def bidiagonal_positions(n: int) -> list[int]:
    """Row index i of each factor I + E_{i,i-1}, in product order.

    L_n = F_n F_{n-1} ... F_2 with F_k = I + E_{n,n-1} + ... + E_{k,k-1}, and
    F_k = (I + E_{k,k-1})(I + E_{k+1,k}) ... (I + E_{n,n-1}).
    """
    return [i for k in range(n, 1, -1) for i in range(k, n + 1)]


def bidiagonal_factorization(n: int) -> list[MatQ]:
    """Elementary factors I + E_{i,i-1} whose ordered product is L_n (empty for n = 1)."""
    if n < 1:
        raise DomainError("bidiagonal_factorization needs n >= 1")
    I = identity(n)
    return [I + elementary(n, i, i - 1) for i in bidiagonal_positions(n)]


@lru_cache(maxsize=None)
def partial_sum_factor(n: int, k: int) -> MatQ:
    """F_k = I + E_{n,n-1} + ... + E_{k,k-1}."""
    return MatQ([[1 if i == j or (i == j + 1 and i + 1 >= k) else 0 for j in range(n)] for i in range(n)])


def is_totally_nonnegative(A: MatQ, cap: int | None = None) -> tuple[bool, MinorSpec | None]:
    """Scan every square minor; return the first negative one in (size, I, J) order."""
    cap = DEFAULT_TNN_CAP if cap is None else cap
    if A.dim > cap:
        raise ResourceError(f"TNN scan of dimension {A.dim} exceeds the cap {cap}")
    for spec in all_minor_specs(A.dim):
        if minor_det(A, spec) < 0:
            return False, spec
    return True, None


def cauchy_binet_sides(A: MatQ, B: MatQ, s: MinorSpec) -> tuple[Fraction, Fraction]:
    """(det((AB)_{I,J}), sum over K of det(A_{I,K}) det(B_{K,J}))."""
    if A.dim != B.dim:
        raise DomainError("A and B must have the same dimension")
    s.validate(A.dim)
    lhs = minor_det(mat_mul(A, B), s)
    rhs = Fraction(0)
    for K in combinations(range(1, A.dim + 1), len(s.I)):
        rhs += minor_det(A, MinorSpec(s.I, K)) * minor_det(B, MinorSpec(K, s.J))
    return lhs, rhs


def cauchy_binet_check(A: MatQ, B: MatQ, s: MinorSpec) -> bool:
    lhs, rhs = cauchy_binet_sides(A, B, s)
    return lhs == rhs


@dataclass(frozen=True)
class ChainCertificate:
    """Index sets R_n, R_{n-1}, ..., R_1 leading from P = R_n to Q = R_1.

    Step k (from R_k to R_{k-1}) selects the minor of F_k with rows R_k and
    columns R_{k-1}.
    """

    n: int
    chain: tuple

    def to_json(self) -> list[list[int]]:
        return [list(R) for R in self.chain]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[int]]) -> ChainCertificate:
        chain = tuple(tuple(int(t) for t in R) for R in data)
        return cls(len(chain), chain)


def _is_shift(Rk: tuple, Rk1: tuple, k: int) -> bool:
    """Whether R_{k-1} = (R_k minus S) union (S - 1) for some S inside R_k and {k..n}, sizes equal."""
    if len(Rk) != len(Rk1):
        return False
    target = set(Rk1)
    movable = [a for a in Rk if a >= k]
    for size in range(len(movable) + 1):
        for S in combinations(movable, size):
            kept = set(Rk) - set(S)
            shifted = {a - 1 for a in S}
            if not kept & shifted and kept | shifted == target:
                return True
    return False


def chain_for(qs: Sequence[int], r: int) -> ChainCertificate:
    """Constant at P down to level q_1 + r, shift all entries by one for r levels, then constant at Q."""
    q1 = qs[0]
    n = qs[-1] + r + 1
    chain = []
    for level in range(n, 0, -1):
        if level >= q1 + r:
            shift = r
        elif level >= q1:
            shift = level - q1
        else:
            shift = 0
        chain.append(tuple(q + shift for q in qs))
    return ChainCertificate(n, tuple(chain))


def verify_chain(cert: ChainCertificate, qs: Sequence[int], r: int) -> list[str]:
    """Re-check a chain from scratch; returns a list of problems (empty means valid).

    Every step must be a legal shift and its elementary minor must have
    determinant 1. Each F_k is totally nonnegative, so one all-ones path in
    the Cauchy-Binet expansion of det((L_n)_{P,Q}) makes it positive.
    """
    problems = []
    n = cert.n
    P = tuple(q + r for q in qs)
    Q = tuple(qs)
    chain = cert.chain
    if len(chain) != n:
        return [f"chain has {len(chain)} sets, expected {n}"]
    if chain[0] != P:
        problems.append(f"R_{n} = {list(chain[0])} is not P = {list(P)}")
    if chain[-1] != Q:
        problems.append(f"R_1 = {list(chain[-1])} is not Q = {list(Q)}")
    if mat_prod([partial_sum_factor(n, k) for k in range(n, 1, -1)]) != pascal_L(n):
        problems.append("F_n ... F_2 does not multiply to L_n")
    for pos in range(n - 1):
        k = n - pos
        Rk, Rk1 = chain[pos], chain[pos + 1]
        if any(not 1 <= t <= n for t in Rk + Rk1):
            problems.append(f"step {k}: index outside 1..{n}")
            continue
        if not _is_shift(Rk, Rk1, k):
            problems.append(f"step {k}: {list(Rk1)} is not a shift of {list(Rk)}")
        d = minor_det(partial_sum_factor(n, k), MinorSpec(Rk, Rk1))
        if d != 1:
            problems.append(f"step {k}: elementary minor determinant is {d}, not 1")
    return problems


def minor_positivity(qs: Sequence[int], r: int) -> tuple[Fraction, ChainCertificate]:
    """det of (L_n)_{P,Q} with P = qs + r, Q = qs, n = q_m + r + 1, plus its chain certificate."""
    qs = tuple(int(q) for q in qs)
    if not qs:
        raise DomainError("qs must be non-empty")
    if qs[0] < 1 or any(b <= a for a, b in zip(qs, qs[1:])):
        raise DomainError(f"qs={list(qs)} must be strictly increasing positive integers")
    if r < 0:
        raise DomainError("r must be >= 0")
    cert = chain_for(qs, r)
    value = minor_det(pascal_L(cert.n), MinorSpec(tuple(q + r for q in qs), qs))
    problems = verify_chain(cert, qs, r)
    if problems or value <= 0:
        raise AssertionError(f"minor positivity failed for qs={list(qs)}, r={r}: det={value}, {problems}")
    return value, cert
