import random
from fractions import Fraction
from itertools import product as cartesian
from math import factorial

import pytest

from lkcert.comb import PkInstance, pk_direct
from lkcert.errors import DomainError, PreconditionError
from lkcert.exact import UniPoly
from lkcert.index import index_of
from lkcert.matrix import MatQ, identity, inverse, jordan_unipotent, mat_prod, nilpotent_block
from lkcert.qu import is_quasi_unipotent
from lkcert.tracepoly import (
    direct_trace,
    expand_trace_poly,
    hypothesis_verifier,
    sampled_qu_family_check,
    trace_poly_by_compositions,
    trace_poly_interpolated,
)
from gen import rand_matrix, rand_qu_positive_index, rand_qu_upper, rand_unimodular, rand_with_index

J2 = jordan_unipotent(2)
UPPER = MatQ([[1, 2], [0, 1]])
LOWER = MatQ([[1, 0], [1, 1]])


def test_expand_examples():
    assert expand_trace_poly(UPPER, J2, 1).poly == UniPoly([2])
    assert expand_trace_poly(LOWER, J2, 1).poly == UniPoly([2, 1])
    for k in range(1, 5):
        for dim in range(1, 5):
            assert expand_trace_poly(identity(dim), jordan_unipotent(dim), k).poly == UniPoly([dim])


def test_interpolated_examples():
    for A in (UPPER, LOWER):
        for k in range(1, 4):
            assert trace_poly_interpolated(A, J2, k) == expand_trace_poly(A, J2, k)
    assert trace_poly_interpolated(MatQ([[3]]), MatQ([[1]]), 2).poly == UniPoly([9])


def test_rejects_non_unipotent_block():
    with pytest.raises(DomainError):
        expand_trace_poly(UPPER, identity(2), 1)
    with pytest.raises(DomainError):
        trace_poly_interpolated(UPPER, -J2, 1)


def test_three_routes_agree_small():
    rng = random.Random(31)
    for _ in range(30):
        n = rng.randint(1, 4)
        A = rand_matrix(rng, n)
        B = mat_prod([Q := rand_unimodular(rng, n), jordan_unipotent(n), inverse(Q)])
        for k in range(1, 4):
            e = expand_trace_poly(A, B, k)
            assert e == trace_poly_by_compositions(A, B, k) == trace_poly_interpolated(A, B, k)


def test_polynomial_matches_direct_traces():
    rng = random.Random(32)
    for _ in range(20):
        n = rng.randint(2, 4)
        A = rand_matrix(rng, n)
        k = rng.randint(1, 3)
        p = expand_trace_poly(A, jordan_unipotent(n), k).poly
        assert p.degree <= k * (n - 1)
        for x in range(k * (n - 1) + 2):
            assert p(x) == direct_trace(A, jordan_unipotent(n), x, k)


def leading_coefficient_sum(A, r, k):
    """Coefficient of n^{rk}: sum over i_1+..+i_k = rk of
    (1/prod i_t!) sum_s x_s x_{s-r+i_1} ... with x_i = A_{i,i-r} (zero out of range)."""
    m1 = A.dim

    def x(i):
        return A.entry(i, i - r) if r + 1 <= i <= m1 else Fraction(0)

    total = Fraction(0)
    for parts in cartesian(range(r * k + 1), repeat=k):
        if sum(parts) != r * k:
            continue
        w = Fraction(1)
        for i in parts:
            w /= factorial(i)
        for s in range(1, m1 + 1):
            term, pos = x(s), s
            for t in range(k - 1):
                pos = pos - r + parts[t]
                term *= x(pos)
            total += w * term
    return total


def test_leading_coefficient_law():
    rng = random.Random(33)
    for _ in range(40):
        n = rng.randint(2, 5)
        r = rng.randint(1, n - 1)
        A = rand_with_index(rng, n, r)
        k = rng.randint(1, 3)
        p = expand_trace_poly(A, jordan_unipotent(n), k).poly
        assert p.degree <= r * k
        lead = p.coeff(r * k)
        xs = tuple(A.entry(i, i - r) if i > r else 0 for i in range(1, n + 1))
        assert lead == leading_coefficient_sum(A, r, k) == pk_direct(PkInstance(r, n - 1, xs), k)


def test_verifier_examples():
    rep = hypothesis_verifier(UPPER, J2)
    assert rep.verdict and rep.witness is None and rep.checked_k == (1, 2)
    rep = hypothesis_verifier(LOWER, J2)
    assert not rep.verdict
    w = rep.witness
    assert (w.k, w.n1, w.n2, w.t1, w.t2) == (1, 0, 1, 2, 3)
    assert hypothesis_verifier(J2, J2).verdict


def test_verifier_preconditions():
    with pytest.raises(PreconditionError) as e:
        hypothesis_verifier(MatQ.diag([2, 1]), J2)
    assert e.value.kind == "A-not-quasi-unipotent"
    with pytest.raises(PreconditionError) as e:
        hypothesis_verifier(identity(2), identity(2))
    assert e.value.kind == "B-not-single-block"
    with pytest.raises(PreconditionError) as e:
        hypothesis_verifier(identity(2), MatQ([[2, 1], [0, 2]]))
    assert e.value.kind == "B-not-quasi-unipotent"
    with pytest.raises(PreconditionError) as e:
        hypothesis_verifier(identity(2), jordan_unipotent(3))
    assert e.value.kind == "dimension-mismatch"


def test_verifier_negative_eigenvalue_block():
    # tr(A B^n) = (-1)^n for A = [1], B = [-1]: not independent of n
    rep = hypothesis_verifier(MatQ([[1]]), MatQ([[-1]]))
    assert not rep.verdict and (rep.witness.t1, rep.witness.t2) == (1, -1)
    B = -jordan_unipotent(3)
    assert not hypothesis_verifier(identity(3), B).verdict
    # upper triangular A: tr((AB^n)^k) = (-1)^{nk} tr(A^k), constant iff tr(A^k) = 0 for odd k
    A = MatQ([[1, 5, 0], [0, -1, 2], [0, 0, 1]])
    rep = hypothesis_verifier(A, B)
    assert not rep.verdict and rep.witness.k == 1
    C = MatQ([[1, 5], [0, -1]])
    assert hypothesis_verifier(C, -J2).verdict


def test_verifier_witnesses_reproduce():
    rng = random.Random(34)
    seen_k = set()
    for _ in range(60):
        n = rng.randint(2, 5)
        A = rand_qu_positive_index(rng, n)
        B = jordan_unipotent(n) if rng.random() < 0.5 else -jordan_unipotent(n)
        rep = hypothesis_verifier(A, B)
        assert not rep.verdict
        w = rep.witness
        assert w.k <= n
        assert direct_trace(A, B, w.n1, w.k) == w.t1 != w.t2 == direct_trace(A, B, w.n2, w.k)
        seen_k.add(w.k)
    assert seen_k  # at least one witness


def test_verifier_needs_higher_k():
    # x = (0, 1, -1) on the first subdiagonal: p_1 = 0 but p_2 != 0
    A = MatQ([[1, 0, 0], [1, 1, 0], [0, -1, 1]])
    assert index_of(A) == 1 and is_quasi_unipotent(A)
    assert expand_trace_poly(A, jordan_unipotent(3), 1).poly == UniPoly([3])
    assert expand_trace_poly(A, jordan_unipotent(3), 2).poly == UniPoly([3, 1, 1])
    rep = hypothesis_verifier(A, jordan_unipotent(3))
    assert not rep.verdict
    assert (rep.witness.k, rep.witness.t1, rep.witness.t2) == (2, 3, 5)


def test_upper_triangular_always_true():
    rng = random.Random(35)
    for _ in range(40):
        n = rng.randint(1, 5)
        assert hypothesis_verifier(rand_qu_upper(rng, n), jordan_unipotent(n)).verdict


def test_sampled_family():
    assert sampled_qu_family_check(UPPER, J2, 10)
    assert not sampled_qu_family_check(LOWER, J2, 2)
    rng = random.Random(36)
    for _ in range(10):
        n = rng.randint(1, 4)
        assert sampled_qu_family_check(rand_qu_positive_index(rng, n) if n > 1 else MatQ([[-1]]), identity(n), 3)
