import random

import pytest

from sl2proxy.forms import (DomainError, beta, build_change_of_basis, canonical_triple,
                            change_of_basis_matrix, form_matrix_J, in_O_flat, in_O_sharp, in_SO_flat,
                            in_SO_sharp, spinor_triple)
from sl2proxy.matlin import det3, identity3, mat_eq, mul2, mul3, scalar_mul, transpose3
from sl2proxy.pgl2_so3 import phi
from sl2proxy.simulation import SimulatedField

from conftest import enc

LADDER = [7, 11, 13, 25, 1009]


def _gl2(K, rng):
    while True:
        A = tuple(K.random(rng) for _ in range(4))
        if not K.is_zero(K.sub(K.mul(A[0], A[3]), K.mul(A[1], A[2]))):
            return A


def _two_I(K):
    return scalar_mul(K, K.integer(2), identity3(K))


def test_membership_examples():
    K = SimulatedField(7)
    I = identity3(K)
    assert in_O_sharp(K, I) and in_O_flat(K, I)
    D = (K.one, K.zero, K.zero, K.zero, K.one, K.zero, K.zero, K.zero, K.neg(K.one))
    assert in_O_sharp(K, D) and not in_SO_sharp(K, D)


def test_random_gl3_rarely_preserves_J():
    K = SimulatedField(7)
    rng = random.Random(0)
    hits = sum(in_O_flat(K, tuple(K.random(rng) for _ in range(9))) for _ in range(300))
    assert hits <= 2  # |O_3(7)| / 7^9 is about 1.7e-5


def test_explicit_pairs():
    K7 = SimulatedField(7)
    a, b = enc(K7, 3, 2)
    P = change_of_basis_matrix(K7, a, b)
    J = form_matrix_J(K7)
    assert mat_eq(K7, mul3(K7, mul3(K7, P, J), transpose3(P)), _two_I(K7))
    K13 = SimulatedField(13)
    (eps,) = enc(K13, 5)
    P = change_of_basis_matrix(K13, eps, K13.zero)
    J = form_matrix_J(K13)
    assert mat_eq(K13, mul3(K13, mul3(K13, P, J), transpose3(P)), _two_I(K13))


@pytest.mark.parametrize("q", LADDER)
def test_change_of_basis_conjugation(q):
    K = SimulatedField(q, seed=q)
    rng = random.Random(q)
    cob = build_change_of_basis(K, rng)
    J = form_matrix_J(K)
    assert mat_eq(K, mul3(K, mul3(K, cob.P, J), cob.Pt), _two_I(K))
    assert not K.is_zero(det3(K, cob.P))
    assert mat_eq(K, cob.flat_to_sharp(identity3(K)), identity3(K))
    for _ in range(60):
        M = phi(K, _gl2(K, rng))
        assert in_SO_flat(K, M)
        N = cob.flat_to_sharp(M, check=True)
        assert in_SO_sharp(K, N)
        assert mat_eq(K, cob.sharp_to_flat(N, check=True), M)


def test_domain_errors():
    K = SimulatedField(11)
    cob = build_change_of_basis(K, random.Random(0))
    bad = tuple(K.one for _ in range(9))
    with pytest.raises(DomainError):
        cob.flat_to_sharp(bad, check=True)
    with pytest.raises(DomainError):
        cob.sharp_to_flat(bad, check=True)


@pytest.mark.parametrize("q", [7, 13, 25])
def test_triples(q):
    K = SimulatedField(q)
    a, b = K.two_squares_minus_one(random.Random(1))
    E, W, F = canonical_triple(K)
    V = spinor_triple(K, a, b)
    for X in (E, W, F) + V:
        assert K.is_zero(K.add(X[0], X[3]))
    gram = [beta(K, U, W2) for U in (E, W, F) for W2 in (E, W, F)]
    assert all(K.eq(g, j) for g, j in zip(gram, form_matrix_J(K)))
    two = K.integer(2)
    for i, U in enumerate(V):
        for j, W2 in enumerate(V):
            assert K.eq(beta(K, U, W2), two if i == j else K.zero)
    # quaternion relations V1 V2 = V3, squares are -1
    minus_I = (K.neg(K.one), K.zero, K.zero, K.neg(K.one))
    V1, V2, V3 = V
    assert all(K.eq(x, y) for x, y in zip(mul2(K, V1, V1), minus_I))
    assert all(K.eq(x, y) for x, y in zip(mul2(K, V1, V2), V3))
