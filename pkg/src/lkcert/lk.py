"""End-to-end pipeline: hypotheses, common eigenvector, triangularization certificate."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, PreconditionError, TheoremFalsified
from .exact import format_rat, rat
from .index import is_upper_triangular
from .matrix import (
    MatQ,
    det,
    identity,
    inverse,
    mat_mul,
    mat_prod,
    mat_vec,
    rank_of_rows,
    trace,
    vector_to_json,
)
from .qu import is_quasi_unipotent, single_block_eigenvalue
from .tracepoly import HypothesisReport, hypothesis_verifier, unipotent_frame

CERTIFIED = "hypotheses-hold-certified"
WITNESSED = "hypotheses-fail-witnessed"
PRECONDITION = "precondition-failure"


@dataclass(frozen=True)
class TriangularizationCertificate:
    A: MatQ
    B: MatQ
    P: MatQ
    A_conj: MatQ
    B_conj: MatQ
    common_eigenvector: tuple
    eigenvalue_A: Fraction
    eigenvalue_B: Fraction

    def to_json(self) -> dict:
        return {
            "A": self.A.to_json(),
            "B": self.B.to_json(),
            "P": self.P.to_json(),
            "A_conj": self.A_conj.to_json(),
            "B_conj": self.B_conj.to_json(),
            "common_eigenvector": vector_to_json(self.common_eigenvector),
            "eigenvalue_A": format_rat(self.eigenvalue_A),
            "eigenvalue_B": format_rat(self.eigenvalue_B),
        }

    @classmethod
    def from_json(cls, data: dict) -> TriangularizationCertificate:
        try:
            return cls(
                A=MatQ.from_json(data["A"]),
                B=MatQ.from_json(data["B"]),
                P=MatQ.from_json(data["P"]),
                A_conj=MatQ.from_json(data["A_conj"]),
                B_conj=MatQ.from_json(data["B_conj"]),
                common_eigenvector=tuple(rat(x) for x in data["common_eigenvector"]),
                eigenvalue_A=rat(data["eigenvalue_A"]),
                eigenvalue_B=rat(data["eigenvalue_B"]),
            )
        except KeyError as exc:
            raise DomainError(f"certificate JSON: missing field {exc.args[0]!r}") from None
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"certificate JSON: {exc}") from None


@dataclass(frozen=True)
class Verdict:
    status: str
    report: HypothesisReport | None = None
    cert: TriangularizationCertificate | None = None
    error_kind: str | None = None
    message: str | None = None

    @property
    def exit_code(self) -> int:
        return {CERTIFIED: 0, WITNESSED: 1, PRECONDITION: 2}[self.status]

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "report": None if self.report is None else self.report.to_json(),
            "certificate": None if self.cert is None else self.cert.to_json(),
            "error": None if self.error_kind is None else {"kind": self.error_kind, "message": self.message},
        }


def _normalize(v: Sequence[Fraction]) -> tuple:
    lead = next(x for x in v if x != 0)
    return tuple(x / lead for x in v)


def _span_is_invariant(M: MatQ, basis: list[tuple]) -> bool:
    return rank_of_rows(basis + [mat_vec(M, b) for b in basis]) == len(basis)


def check_certificate(cert: TriangularizationCertificate) -> dict[str, bool]:
    """Re-validate a certificate from raw matrix arithmetic; one flag per property."""
    A, B, P = cert.A, cert.B, cert.P
    dims_ok = len({A.dim, B.dim, P.dim, cert.A_conj.dim, cert.B_conj.dim}) == 1 and len(
        cert.common_eigenvector
    ) == A.dim
    if not dims_ok:
        return {"dimensions": False}
    v = cert.common_eigenvector
    columns = [P.column(j) for j in range(P.dim)]
    checks = {
        "dimensions": True,
        "P_invertible": det(P) != 0,
        "A_conjugation": mat_mul(A, P) == mat_mul(P, cert.A_conj),
        "B_conjugation": mat_mul(B, P) == mat_mul(P, cert.B_conj),
        "A_conj_upper_triangular": is_upper_triangular(cert.A_conj),
        "B_conj_upper_triangular": is_upper_triangular(cert.B_conj),
        "eigenvector_nonzero": any(x != 0 for x in v),
        "A_eigenvector": mat_vec(A, v) == tuple(cert.eigenvalue_A * x for x in v),
        "B_eigenvector": mat_vec(B, v) == tuple(cert.eigenvalue_B * x for x in v),
    }
    checks["flag_invariant"] = checks["P_invertible"] and all(
        _span_is_invariant(M, columns[:i]) for M in (A, B) for i in range(1, P.dim + 1)
    )
    if checks["P_invertible"] and det(cert.A_conj) != 0 and det(cert.B_conj) != 0:
        Ac, Bc = cert.A_conj, cert.B_conj
        comm = mat_prod([inverse(Ac), inverse(Bc), Ac, Bc])
        checks["commutator_unipotent_triangular"] = is_upper_triangular(comm) and all(
            comm.rows[i][i] == 1 for i in range(comm.dim)
        )
    else:
        checks["commutator_unipotent_triangular"] = False
    return checks


def certificate_is_valid(cert: TriangularizationCertificate) -> bool:
    return all(check_certificate(cert).values())


def _triangularize_verified(A: MatQ, B: MatQ) -> TriangularizationCertificate:
    frame = unipotent_frame(A, B)
    P = frame.P
    A_conj = frame.A_conj
    B_conj = mat_mul(mat_mul(frame.P_inv, B), P)
    if not is_upper_triangular(A_conj):
        raise TheoremFalsified(
            "hypotheses verified but A is not upper triangular in the Jordan basis of B",
            A=A.to_json(),
            B=B.to_json(),
            P=P.to_json(),
        )
    v = _normalize(P.column(0))
    cert = TriangularizationCertificate(
        A=A,
        B=B,
        P=P,
        A_conj=A_conj,
        B_conj=B_conj,
        common_eigenvector=v,
        eigenvalue_A=A_conj.rows[0][0],
        eigenvalue_B=B_conj.rows[0][0],
    )
    failed = [name for name, ok in check_certificate(cert).items() if not ok]
    if failed:
        raise TheoremFalsified(f"certificate self-check failed: {failed}", A=A.to_json(), B=B.to_json())
    return cert


def triangularize(A: MatQ, B: MatQ) -> TriangularizationCertificate:
    """Simultaneous triangularization of A and B once the trace hypothesis is verified.

    P is the Jordan basis of the unipotent sign-normalization of B, so its
    first column spans the eigenline of B. A must come out upper triangular;
    if it does not, :class:`TheoremFalsified` is raised and nothing is repaired.
    """
    report = hypothesis_verifier(A, B)
    if not report.verdict:
        raise DomainError(f"trace hypothesis fails: {report.witness}")
    return _triangularize_verified(A, B)


def common_eigenvector(A: MatQ, B: MatQ) -> tuple:
    """Eigenvector shared by A and B, scaled so its first nonzero coordinate is 1."""
    return triangularize(A, B).common_eigenvector


def verify_main_theorem(A: MatQ, B: MatQ) -> Verdict:
    try:
        report = hypothesis_verifier(A, B)
    except PreconditionError as exc:
        return Verdict(PRECONDITION, error_kind=exc.kind, message=str(exc))
    if not report.verdict:
        return Verdict(WITNESSED, report=report)
    return Verdict(CERTIFIED, report=report, cert=_triangularize_verified(A, B))


@dataclass(frozen=True)
class CounterexampleWitness:
    k: int
    n: int
    trace_at_0: Fraction
    trace_at_n: Fraction

    def to_json(self) -> dict:
        return {"k": self.k, "n": self.n, "trace_at_0": format_rat(self.trace_at_0), "trace_at_n": format_rat(self.trace_at_n)}


def counterexample_search(A: MatQ, B: MatQ, kmax: int, nmax: int) -> CounterexampleWitness | None:
    """Least (k, n), lexicographically, with tr((A B^n)^k) != tr(A^k)."""
    if A.dim != B.dim:
        raise DomainError("A and B must have the same dimension")
    if single_block_eigenvalue(B) is None:
        raise DomainError("B must be a single Jordan block")
    if kmax < 1 or nmax < 1:
        raise DomainError("kmax and nmax must be positive")
    powers_of_B = [identity(B.dim)]
    for _ in range(nmax):
        powers_of_B.append(mat_mul(powers_of_B[-1], B))
    ABn = [mat_mul(A, Bn) for Bn in powers_of_B]
    running = list(ABn)
    for k in range(1, kmax + 1):
        if k > 1:
            running = [mat_mul(R, M) for R, M in zip(running, ABn)]
        base = trace(running[0])
        for n in range(1, nmax + 1):
            t = trace(running[n])
            if t != base:
                return CounterexampleWitness(k, n, base, t)
    return None


def commutator(x: MatQ, y: MatQ) -> MatQ:
    """[x, y] = x^{-1} y^{-1} x y."""
    return mat_prod([inverse(x), inverse(y), x, y])


def commutator_qu_check(g: MatQ, xs: Sequence[MatQ], ys: Sequence[MatQ]) -> bool:
    """Quasi-unipotence of g = prod [x_i, y_i] when every x_i, y_i commutes with g.

    Violated preconditions raise :class:`DomainError` naming the failure;
    they are never reported as False.
    """
    if len(xs) != len(ys) or not xs:
        raise DomainError("xs and ys must be non-empty and of equal length")
    for name, M in [("g", g)] + [(f"xs[{i}]", x) for i, x in enumerate(xs)] + [(f"ys[{i}]", y) for i, y in enumerate(ys)]:
        if M.dim != g.dim:
            raise DomainError(f"{name} has dimension {M.dim}, expected {g.dim}")
    for name, M in [(f"xs[{i}]", x) for i, x in enumerate(xs)] + [(f"ys[{i}]", y) for i, y in enumerate(ys)]:
        if det(M) == 0:
            raise DomainError(f"{name} is singular")
    prod = identity(g.dim)
    for x, y in zip(xs, ys):
        prod = mat_mul(prod, commutator(x, y))
    if prod != g:
        raise DomainError("g is not the product of the commutators [xs[i], ys[i]]")
    for label, mats in (("xs", xs), ("ys", ys)):
        for i, M in enumerate(mats):
            if mat_mul(M, g) != mat_mul(g, M):
                raise DomainError(f"{label}[{i}] does not commute with g")
    return is_quasi_unipotent(g).is_quasi_unipotent


def solvability_witness(cert: TriangularizationCertificate) -> MatQ:
    """The conjugated commutator A_conj^{-1} B_conj^{-1} A_conj B_conj (unit upper triangular)."""
    return commutator(cert.A_conj, cert.B_conj)

