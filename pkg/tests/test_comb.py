import random
from fractions import Fraction
from itertools import combinations

import pytest

from lkcert.comb import (
    ChainCertificate,
    PkInstance,
    bidiagonal_factorization,
    cauchy_binet_check,
    cauchy_binet_sides,
    chain_for,
    is_totally_nonnegative,
    matA_from_x,
    matB,
    matM,
    minor_positivity,
    pascal_L,
    pk_direct,
    pk_via_trace,
    theorem_pk_check,
    verify_chain,
)
from lkcert.errors import DomainError, ResourceError
from lkcert.matrix import (
    MatQ,
    MinorSpec,
    det,
    det_cofactor,
    elementary,
    identity,
    mat_mul,
    mat_prod,
    mat_pow,
    minor_det,
    trace,
)
from gen import rand_matrix


def rand_x(rng, size):
    return tuple(Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(size))


def test_pk_direct_examples():
    x1, x2 = Fraction(3), Fraction(-5, 2)
    assert pk_direct(PkInstance(1, 1, (x1, x2)), 1) == x1 + x2
    assert pk_direct(PkInstance(1, 1, (x1, x2)), 2) == x1 * x1 + x2 * x2 + x1 * x2
    for r in range(4):
        assert pk_direct(PkInstance(r, 3, (0, 0, 0, 0)), 3) == 0


def test_matB_examples():
    assert matB(0, 1) == MatQ([[1, 0], [1, 1]])
    assert matB(1, 1) == MatQ([[1, 1], [Fraction(1, 2), 1]])
    for m in range(4):
        assert all(b > 0 for row in matB(m + 1, m).rows for b in row)


def test_matA_examples():
    assert matA_from_x(PkInstance(2, 2, (1, 1, 1))) == matB(2, 2)
    x1, x2 = Fraction(2), Fraction(7)
    assert matA_from_x(PkInstance(1, 1, (x1, x2))) == MatQ([[x1, x1], [x2 / 2, x2]])
    A = matA_from_x(PkInstance(1, 2, (1, 0, 3)))
    assert all(v == 0 for v in A.rows[1])


def test_pk_via_trace_examples():
    assert pk_via_trace(PkInstance(1, 1, (2, 3)), 2) == 4 + 6 + 9
    assert pk_via_trace(PkInstance(2, 2, (0, 0, 0)), 4) == 0


def test_pk_routes_agree():
    rng = random.Random(41)
    for _ in range(60):
        m, r = rng.randint(0, 4), rng.randint(0, 3)
        inst = PkInstance(r, m, rand_x(rng, m + 1))
        for k in range(1, 5):
            assert pk_direct(inst, k) == pk_via_trace(inst, k)


def test_symmetric_form_has_same_traces():
    # with x = y^2 the symmetric diag(y) B diag(y) has the same power traces
    rng = random.Random(42)
    for _ in range(20):
        m, r = rng.randint(0, 3), rng.randint(0, 3)
        y = rand_x(rng, m + 1)
        inst = PkInstance(r, m, tuple(v * v for v in y))
        D = MatQ.diag(y)
        sym = mat_prod([D, matB(r, m), D])
        for k in range(1, 5):
            assert trace(mat_pow(sym, k)) == pk_via_trace(inst, k)


def test_det_identity():
    rng = random.Random(43)
    for _ in range(50):
        m, r = rng.randint(0, 4), rng.randint(0, 3)
        x = rand_x(rng, m + 1)
        prod = Fraction(1)
        for v in x:
            prod *= v
        assert det(matA_from_x(PkInstance(r, m, x))) == det(matB(r, m)) * prod


def test_theorem_pk_examples():
    assert theorem_pk_check(PkInstance(2, 3, (0, 0, 0, 0))) == (True, None)
    inst = PkInstance(1, 1, (1, -1))
    assert pk_direct(inst, 1) == 0 and pk_direct(inst, 2) == 1
    assert theorem_pk_check(inst) == (False, 2)


def test_theorem_pk_random():
    rng = random.Random(44)
    for _ in range(100):
        m, r = rng.randint(0, 5), rng.randint(0, 3)
        x = rand_x(rng, m + 1)
        if not any(x):
            continue
        ok, k = theorem_pk_check(PkInstance(r, m, x))
        assert not ok and 1 <= k <= m + 1
        assert pk_direct(PkInstance(r, m, x), k) != 0


def test_matM_examples():
    assert matM(1, 2) == MatQ([[2, 1, 0], [3, 3, 1], [4, 6, 4]])
    assert det_cofactor(matM(1, 2)) == 4
    for m in range(5):
        assert det_cofactor(matM(0, m)) == 1


def test_matM_is_rescaled_matB():
    from math import factorial

    for r in range(5):
        for m in range(5):
            left = MatQ.diag([factorial(r + i) for i in range(1, m + 2)])
            right = MatQ.diag([Fraction(1, factorial(j)) for j in range(1, m + 2)])
            assert mat_prod([left, matB(r, m), right]) == matM(r, m)


def test_principal_minors_of_B_nonsingular():
    for r in range(5):
        for m in range(6):
            B, M = matB(r, m), matM(r, m)
            for size in range(1, m + 2):
                for S in combinations(range(1, m + 2), size):
                    spec = MinorSpec(S, S)
                    assert minor_det(B, spec) != 0
                    assert minor_det(M, spec) > 0


def test_pascal_examples():
    assert pascal_L(3) == MatQ([[1, 0, 0], [1, 1, 0], [1, 2, 1]])
    for n in range(1, 8):
        L = pascal_L(n)
        assert all(L[i, j] == 0 for i in range(n) for j in range(i + 1, n))
        assert det(L) == 1


def test_bidiagonal_examples():
    assert bidiagonal_factorization(1) == []
    assert bidiagonal_factorization(2) == [identity(2) + elementary(2, 2, 1)]
    assert mat_prod(bidiagonal_factorization(3)) == pascal_L(3)


@pytest.mark.parametrize("n", range(2, 9))
def test_bidiagonal_product(n):
    factors = bidiagonal_factorization(n)
    assert mat_prod(factors) == pascal_L(n)
    for F in factors:
        off = [(i, j) for i in range(n) for j in range(n) if i != j and F[i, j] != 0]
        assert len(off) == 1 and off[0][0] == off[0][1] + 1


def test_factors_tnn():
    for n in range(2, 7):
        for F in {tuple(F.rows): F for F in bidiagonal_factorization(n)}.values():
            assert is_totally_nonnegative(F) == (True, None)


def test_tnn_examples():
    assert is_totally_nonnegative(pascal_L(5)) == (True, None)
    ok, spec = is_totally_nonnegative(MatQ([[0, 1], [1, 0]]))
    assert not ok and spec == MinorSpec((1, 2), (1, 2))
    with pytest.raises(ResourceError):
        is_totally_nonnegative(identity(7))
    assert is_totally_nonnegative(identity(7), cap=7)[0]


def test_tnn_first_violator_is_lexicographic():
    A = MatQ([[1, -1, 0], [0, 1, -2], [0, 0, 1]])
    ok, spec = is_totally_nonnegative(A)
    assert not ok and spec == MinorSpec((1,), (2,))


def test_tnn_closed_under_products():
    rng = random.Random(45)
    for _ in range(20):
        n = rng.randint(2, 5)
        i, j = rng.randint(2, n), rng.randint(2, n)
        F = identity(n) + elementary(n, i, i - 1).scale(rng.randint(0, 3))
        G = identity(n) + elementary(n, j - 1, j).scale(rng.randint(0, 3))
        assert is_totally_nonnegative(mat_prod([F, G, F]))[0]


def test_cauchy_binet():
    assert cauchy_binet_check(identity(3), identity(3), MinorSpec((1, 2), (1, 2)))
    assert cauchy_binet_sides(identity(3), identity(3), MinorSpec((1, 2), (1, 3))) == (0, 0)
    L = pascal_L(3)
    assert cauchy_binet_sides(L, L, MinorSpec((1, 2, 3), (1, 2, 3))) == (1, 1)
    rng = random.Random(46)
    for _ in range(40):
        A, B = rand_matrix(rng, 4), rand_matrix(rng, 4)
        I = tuple(sorted(rng.sample(range(1, 5), 2)))
        J = tuple(sorted(rng.sample(range(1, 5), 2)))
        assert cauchy_binet_check(A, B, MinorSpec(I, J))


def test_minor_positivity_examples():
    value, cert = minor_positivity((2, 3, 4), 1)
    assert value == 4 == det(matM(1, 2))
    assert verify_chain(cert, (2, 3, 4), 1) == []
    value, cert = minor_positivity((1, 2, 3), 1)
    assert value == 1  # binom(p-1, q-1) with P = {2,3,4}, Q = {1,2,3}
    for m in range(1, 5):
        qs = tuple(range(1, m + 2))
        value, cert = minor_positivity(qs, 0)
        assert value == 1 and all(R == qs for R in cert.chain)
    value, cert = minor_positivity((1, 3), 2)
    assert value > 0 and cert.n == 6 and len(cert.chain) == 6
    assert value == det_cofactor(MatQ([[1, 1], [1, 6]])) == 5  # rows p-1 = 2, 4; cols q-1 = 0, 2


def test_minor_positivity_rejects_bad_qs():
    for qs in [(2, 2), (3, 1), (0, 1), ()]:
        with pytest.raises(DomainError):
            minor_positivity(qs, 1)


def test_chain_verification_catches_tampering():
    cert = chain_for((1, 3), 2)
    chain = list(cert.chain)
    chain[3] = (1, 4)
    problems = verify_chain(ChainCertificate(cert.n, tuple(chain)), (1, 3), 2)
    assert problems
    assert ChainCertificate.from_json(cert.to_json()) == cert
