"""Traces of (A B^n)^k as exact polynomials in n.

For unipotent B = I + N with N^{m+1} = 0,

    A B^n = sum_{i=0}^{m} C(n, i) A N^i,

so tr((A B^n)^k) is a polynomial in n of degree at most k*m. The expansion
here works with matrices whose entries are polynomials in n, stored as a list
of coefficient matrices (index = power of n).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian

from .errors import DomainError, PreconditionError
from .exact import UniPoly, binom_poly, format_rat, poly_interpolate
from .matrix import (
    MatQ,
    conjugate,
    identity,
    inverse,
    jordan_unipotent,
    mat_mul,
    mat_pow,
    trace,
)
from .qu import (
    is_quasi_unipotent,
    is_single_jordan_block,
    is_unipotent,
    jordan_basis_single_block,
)

PolyMatrix = list  # list[MatQ], coefficient of n**d at position d


@dataclass(frozen=True)
class TracePoly:
    k: int
    poly: UniPoly

    def to_json(self) -> dict:
        return {"k": self.k, "coeffs": self.poly.to_json()}

    @classmethod
    def from_json(cls, data) -> TracePoly:
        return cls(int(data["k"]), UniPoly.from_json(data["coeffs"]))


@dataclass(frozen=True)
class TraceWitness:
    """tr((A B^n1)^k) = t1 differs from tr((A B^n2)^k) = t2."""

    k: int
    n1: int
    n2: int
    t1: Fraction
    t2: Fraction

    def to_json(self) -> dict:
        return {"k": self.k, "n1": self.n1, "n2": self.n2, "t1": format_rat(self.t1), "t2": format_rat(self.t2)}


@dataclass(frozen=True)
class HypothesisReport:
    verdict: bool
    checked_k: tuple
    witness: TraceWitness | None = None
    eigenvalue_B: Fraction = Fraction(1)
    trace_polys: tuple = field(default=(), compare=False)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "checked_k": list(self.checked_k),
            "witness": None if self.witness is None else self.witness.to_json(),
            "eigenvalue_B": format_rat(self.eigenvalue_B),
            "trace_polys": [tp.to_json() for tp in self.trace_polys],
        }


def _require_unipotent_block(B: MatQ) -> None:
    ok, lam = is_single_jordan_block(B)
    if not ok or lam != 1:
        raise DomainError("B must be a unipotent single Jordan block")


def _polymat_mul(X: PolyMatrix, Y: PolyMatrix) -> PolyMatrix:
    out: list = [None] * (len(X) + len(Y) - 1)
    for d, Xd in enumerate(X):
        if Xd.is_zero():
            continue
        for e, Ye in enumerate(Y):
            term = mat_mul(Xd, Ye)
            out[d + e] = term if out[d + e] is None else out[d + e] + term
    dim = X[0].dim
    return [M if M is not None else MatQ.zero(dim) for M in out]


def _step_polymatrix(A: MatQ, B: MatQ) -> PolyMatrix:
    """A B^n = sum_i binom_poly(i) * A N^i as coefficient matrices in n."""
    n = A.dim
    N = B - identity(n)
    terms = []
    ANi = A
    for i in range(n):  # N^n = 0
        terms.append((binom_poly(i), ANi))
        ANi = mat_mul(ANi, N)
    coeffs = []
    for d in range(n):
        acc = MatQ.zero(n)
        for bp, M in terms:
            c = bp.coeff(d)
            if c:
                acc = acc + M.scale(c)
        coeffs.append(acc)
    return coeffs


def _trace_of(X: PolyMatrix) -> UniPoly:
    return UniPoly(trace(M) for M in X)


def trace_polys(A: MatQ, B: MatQ, kmax: int) -> list[TracePoly]:
    """tr((A B^n)^k) for k = 1..kmax, sharing the running power of A B^n."""
    _require_unipotent_block(B)
    if A.dim != B.dim:
        raise DomainError("A and B must have the same dimension")
    step = _step_polymatrix(A, B)
    out, acc = [], step
    for k in range(1, kmax + 1):
        if k > 1:
            acc = _polymat_mul(step, acc)
        out.append(TracePoly(k, _trace_of(acc)))
    return out


def expand_trace_poly(A: MatQ, B: MatQ, k: int) -> TracePoly:
    """tr((A B^n)^k) from the binomial expansion of B^n = (I + N)^n.

    The sum over compositions (i_1, ..., i_k) with parts in 0..m of
    prod C(n, i_t) * tr(A N^{i_1} ... A N^{i_k}) is accumulated from the
    right: the sum over the last t parts is formed once and reused for every
    choice of the earlier parts.
    """
    if k < 1:
        raise DomainError("k must be positive")
    return trace_polys(A, B, k)[-1]


def trace_poly_by_compositions(A: MatQ, B: MatQ, k: int) -> TracePoly:
    """The same polynomial, one composition at a time. Exponential; small inputs only."""
    _require_unipotent_block(B)
    m = A.dim - 1
    N = B - identity(A.dim)
    factors = [mat_mul(A, mat_pow(N, i)) for i in range(m + 1)]
    total = UniPoly()
    for parts in cartesian(range(m + 1), repeat=k):
        M = factors[parts[0]]
        for i in parts[1:]:
            M = mat_mul(M, factors[i])
        t = trace(M)
        if not t:
            continue
        coeff = UniPoly([1])
        for i in parts:
            coeff = coeff * binom_poly(i)
        total = total + coeff * t
    return TracePoly(k, total)


def trace_poly_interpolated(A: MatQ, B: MatQ, k: int) -> TracePoly:
    """Interpolate tr((A B^n)^k) sampled at n = 0..k*m+1."""
    if k < 1:
        raise DomainError("k must be positive")
    _require_unipotent_block(B)
    m = A.dim - 1
    points = []
    ABn = A
    for n in range(k * m + 2):
        points.append((n, trace(mat_pow(ABn, k))))
        ABn = mat_mul(ABn, B)
    return TracePoly(k, poly_interpolate(points))


@dataclass(frozen=True)
class UnipotentFrame:
    """B rewritten as eigenvalue * U with U unipotent, and the Jordan basis P of U."""

    eigenvalue: Fraction
    P: MatQ
    P_inv: MatQ
    A_conj: MatQ
    U_conj: MatQ


def unipotent_frame(A: MatQ, B: MatQ) -> UnipotentFrame:
    """Check the pipeline hypotheses on (A, B) and conjugate to the Jordan basis.

    Raises :class:`PreconditionError` tagged with the failing hypothesis.
    """
    if A.dim != B.dim:
        raise PreconditionError("dimension-mismatch", f"A is {A.dim}x{A.dim} but B is {B.dim}x{B.dim}")
    if not is_quasi_unipotent(A):
        raise PreconditionError("A-not-quasi-unipotent", "A has an eigenvalue that is not a root of unity")
    if not is_quasi_unipotent(B):
        raise PreconditionError("B-not-quasi-unipotent", "B has an eigenvalue that is not a root of unity")
    ok, lam = is_single_jordan_block(B)
    if not ok:
        raise PreconditionError("B-not-single-block", "the Jordan form of B has more than one block")
    U = B if lam == 1 else -B
    # re-derived rather than assumed
    ok_u, lam_u = is_single_jordan_block(U)
    if not ok_u or lam_u != 1 or not is_unipotent(U):
        raise AssertionError("sign-normalized B is not a unipotent single block")
    P = jordan_basis_single_block(U)
    P_inv = inverse(P)
    U_conj = conjugate(U, P, P_inv)
    if U_conj != jordan_unipotent(A.dim):
        raise AssertionError("Jordan basis does not conjugate U to I + N")
    return UnipotentFrame(lam, P, P_inv, conjugate(A, P, P_inv), U_conj)


def direct_trace(A: MatQ, B: MatQ, n: int, k: int) -> Fraction:
    return trace(mat_pow(mat_mul(A, mat_pow(B, n)), k))


def hypothesis_verifier(A: MatQ, B: MatQ) -> HypothesisReport:
    """Decide whether tr((A B^n)^k) is independent of n for every k >= 1.

    Writing B = s*U with s = +-1 and U unipotent, tr((A B^n)^k) equals
    s^{nk} q_k(n) for the polynomial q_k = tr((A U^n)^k). It is independent of
    n iff q_k is constant and, when s = -1 and k is odd, q_k = 0. Checking
    k = 1..m+1 suffices: those power sums fix the characteristic polynomial of
    A B^n, and with it every higher power sum.
    """
    frame = unipotent_frame(A, B)
    lam = frame.eigenvalue
    polys = trace_polys(frame.A_conj, frame.U_conj, A.dim)
    checked = []
    for tp in polys:
        checked.append(tp.k)
        q = tp.poly
        independent = q.is_constant() and (lam == 1 or tp.k % 2 == 0 or q.is_zero())
        if independent:
            continue
        witness = _trace_witness(A, B, tp, lam)
        return HypothesisReport(False, tuple(checked), witness, lam, tuple(polys[: len(checked)]))
    return HypothesisReport(True, tuple(checked), None, lam, tuple(polys))


def _trace_witness(A: MatQ, B: MatQ, tp: TracePoly, lam: Fraction) -> TraceWitness:
    k, q = tp.k, tp.poly

    def predicted(n: int) -> Fraction:
        return lam ** (n * k) * q(n)

    t0 = predicted(0)
    # q(n) = +-q(0) has at most 2*deg roots unless q is constant
    for n in range(1, 2 * max(q.degree, 0) + 3):
        if predicted(n) != t0:
            break
    else:
        raise AssertionError("nonconstant trace polynomial without a witness")
    t1, t2 = direct_trace(A, B, 0, k), direct_trace(A, B, n, k)
    if (t1, t2) != (t0, predicted(n)):
        raise AssertionError("trace polynomial disagrees with direct computation")
    return TraceWitness(k, 0, n, t1, t2)


def sampled_qu_family_check(A: MatQ, B: MatQ, nmax: int) -> bool:
    """Whether A B^n is quasi-unipotent for n = 0..nmax.

    Evidence only: a False refutes the hypothesis, a True proves nothing for
    larger n.
    """
    if A.dim != B.dim:
        raise DomainError("A and B must have the same dimension")
    ABn = A
    for _ in range(nmax + 1):
        if not is_quasi_unipotent(ABn):
            return False
        ABn = mat_mul(ABn, B)
    return True
