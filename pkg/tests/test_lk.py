import json
import random

import pytest

from lkcert import lk
from lkcert.errors import DomainError, TheoremFalsified
from lkcert.lk import (
    CERTIFIED,
    PRECONDITION,
    WITNESSED,
    TriangularizationCertificate,
    certificate_is_valid,
    check_certificate,
    commutator,
    commutator_qu_check,
    common_eigenvector,
    counterexample_search,
    solvability_witness,
    triangularize,
    verify_main_theorem,
)
from lkcert.matrix import MatQ, identity, inverse, jordan_unipotent, mat_mul, mat_prod, mat_vec, rank_of_rows
from lkcert.qu import is_unipotent
from gen import central_commutator_instance, rand_qu_positive_index, rand_qu_upper, rand_unimodular

J2 = jordan_unipotent(2)
UPPER = MatQ([[1, 2], [0, 1]])
LOWER = MatQ([[1, 0], [1, 1]])


def parallel(u, v):
    return rank_of_rows([u, v]) == 1


def test_verify_examples():
    v = verify_main_theorem(UPPER, J2)
    assert v.status == CERTIFIED and v.exit_code == 0
    assert parallel(v.cert.common_eigenvector, (1, 0))
    v = verify_main_theorem(LOWER, J2)
    assert v.status == WITNESSED and v.exit_code == 1
    w = v.report.witness
    assert (w.k, w.t1, w.t2) == (1, 2, 3)
    v = verify_main_theorem(MatQ.diag([2, 1]), J2)
    assert v.status == PRECONDITION and v.error_kind == "A-not-quasi-unipotent" and v.exit_code == 2


def test_verify_distinct_precondition_kinds():
    assert verify_main_theorem(identity(2), identity(3)).error_kind == "dimension-mismatch"
    assert verify_main_theorem(identity(2), identity(2)).error_kind == "B-not-single-block"


def test_triangularize_examples():
    rng = random.Random(51)
    for _ in range(10):
        A = rand_qu_upper(rng, 4)
        cert = triangularize(A, jordan_unipotent(4))
        assert certificate_is_valid(cert)
    cert = triangularize(jordan_unipotent(3), jordan_unipotent(3))
    assert cert.common_eigenvector == (1, 0, 0)


def test_triangularize_refuses_unverified():
    with pytest.raises(DomainError):
        triangularize(LOWER, J2)


def test_theorem_contradiction_aborts_loudly():
    with pytest.raises(TheoremFalsified) as e:
        lk._triangularize_verified(LOWER, J2)
    assert "A" in e.value.inputs and "B" in e.value.inputs


def test_conjugation_covariance():
    rng = random.Random(52)
    for _ in range(30):
        n = rng.randint(2, 5)
        A = rand_qu_upper(rng, n)
        B = jordan_unipotent(n) if rng.random() < 0.7 else -jordan_unipotent(n)
        if not verify_main_theorem(A, B).status == CERTIFIED:
            continue
        Q = rand_unimodular(rng, n)
        Qi = inverse(Q)
        A2, B2 = mat_prod([Q, A, Qi]), mat_prod([Q, B, Qi])
        v = verify_main_theorem(A2, B2)
        assert v.status == CERTIFIED
        assert certificate_is_valid(v.cert)
        assert parallel(v.cert.common_eigenvector, mat_vec(Q, common_eigenvector(A, B)))
        c = solvability_witness(v.cert)
        assert is_unipotent(c) and all(c[i, j] == 0 for i in range(n) for j in range(i))


def test_eigenline_scale_invariant():
    A, B = rand_qu_upper(random.Random(53), 3), jordan_unipotent(3)
    assert parallel(common_eigenvector(A, B), common_eigenvector(-A, B))


def test_certificate_tampering_detected():
    cert = verify_main_theorem(UPPER, J2).cert
    data = cert.to_json()
    data["A_conj"]["entries"][1][0] = "1"
    bad = TriangularizationCertificate.from_json(data)
    checks = check_certificate(bad)
    assert not checks["A_conjugation"] and not checks["A_conj_upper_triangular"]
    data = cert.to_json()
    data["common_eigenvector"] = ["0", "1"]
    assert not certificate_is_valid(TriangularizationCertificate.from_json(data))


def test_determinism():
    rng = random.Random(54)
    A = rand_qu_upper(rng, 4)
    B = mat_prod([Q := rand_unimodular(rng, 4), jordan_unipotent(4), inverse(Q)])
    a = json.dumps(verify_main_theorem(A, B).to_json())
    b = json.dumps(verify_main_theorem(A, B).to_json())
    assert a == b


def test_counterexample_examples():
    w = counterexample_search(LOWER, J2, 3, 3)
    assert (w.k, w.n, w.trace_at_0, w.trace_at_n) == (1, 1, 2, 3)
    assert counterexample_search(UPPER, J2, 5, 5) is None
    with pytest.raises(DomainError):
        counterexample_search(UPPER, identity(2), 2, 2)


def test_counterexample_always_found_for_positive_index():
    rng = random.Random(55)
    for _ in range(30):
        n = rng.randint(2, 4)
        m = n - 1
        A = rand_qu_positive_index(rng, n)
        w = counterexample_search(A, jordan_unipotent(n), m + 1, (m + 1) * m + 1)
        assert w is not None and w.k <= m + 1


def test_commutator_examples():
    I = identity(2)
    assert commutator_qu_check(I, [I], [I])
    x = MatQ([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    y = MatQ([[1, 0, 0], [0, 1, 1], [0, 0, 1]])
    g = commutator(x, y)
    assert g == MatQ([[1, 0, 1], [0, 1, 0], [0, 0, 1]])
    assert commutator_qu_check(g, [x], [y])
    q = commutator(MatQ([[0, -1], [1, 0]]), MatQ([[0, 1], [1, 0]]))
    assert q == identity(2).scale(-1)
    assert commutator_qu_check(q, [MatQ([[0, -1], [1, 0]])], [MatQ([[0, 1], [1, 0]])])


def test_commutator_precondition_violations():
    x = MatQ([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    y = MatQ([[1, 0, 0], [0, 1, 1], [0, 0, 1]])
    with pytest.raises(DomainError, match="product"):
        commutator_qu_check(identity(3), [x], [y])
    r3, s = MatQ([[0, -1], [1, -1]]), MatQ([[0, 1], [1, 0]])
    with pytest.raises(DomainError, match="commute"):
        commutator_qu_check(commutator(r3, s), [r3], [s])
    with pytest.raises(DomainError, match="singular"):
        commutator_qu_check(identity(2), [MatQ.zero(2)], [identity(2)])


def test_commutator_random_instances():
    rng = random.Random(56)
    for _ in range(30):
        g, xs, ys = central_commutator_instance(rng)
        assert commutator_qu_check(g, xs, ys)
