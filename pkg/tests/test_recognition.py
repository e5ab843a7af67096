import random

import pytest

from sl2proxy.bbgroup import CenterQuotientView
from sl2proxy.matlin import det2, identity2, inv2, mat_eq, mat_neg, mul2, proj_eq
from sl2proxy.oracle import build_adjoint_bundle
from sl2proxy.recognition import (FlavorError, NotInNormalizer, Recognizer, WhiteningExhausted,
                                  build_sl2_proxy, random_sl2, transvection_decompose)
from sl2proxy.simulation import SimulatedGroup, whitebox

from conftest import dec, enc, proxy_for


def _product(K, factors):
    out = identity2(K)
    for f in factors:
        out = mul2(K, out, f)
    return out


def test_transvection_examples():
    P = proxy_for(7, "sl2")
    K = P.field
    x = enc(K, 0, 1, 6, 0)
    assert [dec(K, f) for f in transvection_decompose(K, x)] == [(1, 1, 0, 1), (1, 0, 6, 1), (1, 1, 0, 1)]
    assert transvection_decompose(K, identity2(K)) == []
    (a,) = enc(K, 3)
    d = (a, K.zero, K.zero, K.inv(a))
    fs = transvection_decompose(K, d)
    assert len(fs) == 4 and mat_eq(K, _product(K, fs), d)
    b_only = enc(K, 1, 4, 0, 1)
    assert len(transvection_decompose(K, b_only)) == 3


def test_psi_basics():
    P = proxy_for(7, "sl2")
    rec, K, Y = P.state, P.field, P.group
    minus_I = mat_neg(K, identity2(K))
    assert Y.is_identity(rec.psi(identity2(K)))
    assert rec.psi(minus_I) == rec.z
    with whitebox():
        assert Y.decode(rec.z) == (6, 0, 0, 6)
    assert Y.is_identity(rec.psi_bar(identity2(K)))
    assert rec.view.is_identity(rec.psi_bar(minus_I))
    assert mat_eq(K, rec.theta(Y.identity), identity2(K))
    assert mat_eq(K, rec.theta(rec.z), minus_I)


@pytest.mark.parametrize("q", [7, 1009])
def test_transvection_images_have_odd_order(q):
    P = proxy_for(q, "sl2")
    K, Y, rec = P.field, P.group, P.state
    rng = random.Random(4)
    for _ in range(20):
        for f in transvection_decompose(K, random_sl2(K, rng)):
            assert Y.is_odd_order(rec.psi(f))


@pytest.mark.parametrize("q", [7, 13, 1009])
def test_psi_is_a_homomorphism_lifting_psi_bar(q):
    P = proxy_for(q, "sl2")
    K, Y, rec = P.field, P.group, P.state
    rng = random.Random(q)
    for _ in range(100):
        A, B = random_sl2(K, rng), random_sl2(K, rng)
        assert Y.mul(rec.psi(A), rec.psi(B)) == rec.psi(mul2(K, A, B))
        assert rec.view.eq(rec.psi(A), rec.psi_bar(A))


def test_seed_consistency():
    P = proxy_for(11, "sl2")
    rec, K = P.state, P.field
    for name, T in rec.tori.items():
        assert rec.view.eq(rec.psi_bar(T.matrix), T.generator)
        assert proj_eq(K, rec.whiten_NS(T.generator, name), T.matrix)
        assert proj_eq(K, rec.theta_bar(T.generator), T.matrix)
        u, U = rec._inverter(name)
        assert rec.view.eq(rec.psi_bar(U), u)
        assert K.eq(det2(K, U), K.one)
        assert rec.view.is_involution(u)


def _normalizer_elements(rec, name, els):
    """Elements of N(T) for a white torus T, found by whitebox decoding."""
    G = rec.Y
    gen = rec.tori[name].generator
    out = []
    with whitebox():
        F = G.plain
        g = G.decode(gen)
        for h in els:
            c = G.decode(G.conj(gen, h))
            # conjugate of g is g or g^-1 (mod sign) exactly for normalizer elements
            cands = [g, (g[3], F.neg(g[1]), F.neg(g[2]), g[0])]
            cands += [tuple(F.neg(v) for v in m) for m in cands]
            if c in cands:
                out.append(h)
    return out


@pytest.mark.parametrize("name", ["S", "R"])
def test_whiten_normalizer_exhaustive_q7(name):
    P = proxy_for(7, "sl2")
    rec, Y = P.state, P.group
    with whitebox():
        els = list(Y.elements())
    normal = _normalizer_elements(rec, name, els)
    q = 7
    expected = {"S": 2 * (q - 1), "R": 2 * (q + 1)}[name]  # N(T) has order 2|T| in SL2
    assert len(normal) == expected
    for y in normal:
        assert rec.view.eq(rec.psi_bar(rec.whiten_NS(y, name)), y)
    outsider = next(y for y in els if y not in set(normal))
    with pytest.raises(NotInNormalizer):
        rec.whiten_NS(outsider, name)


def test_whiten_centralizer_q7():
    P = proxy_for(7, "psl2")
    rec, Y = P.state, P.group
    rng = random.Random(3)
    assert mat_eq(P.field, rec.whiten_centralizer(rec.s, rec.sigma, rec.s), rec.sigma)
    for _ in range(10):
        a, A, g = rec.random_white_involution()
        with whitebox():
            cent = [y for y in Y.elements() if Y.commutes(y, a)]
        for y in rng.sample(cent, 4):
            assert rec.view.eq(rec.psi_bar(rec.whiten_centralizer(a, A, y)), y)
            assert rec.view.eq(rec.psi_bar(rec.whiten_centralizer(a, A, y, conjugator=g)), y)


def test_whiten_involution_cache_and_squares():
    P = proxy_for(13, "sl2")
    rec, K, Y = P.state, P.field, P.group
    t = rec.view.random_involution(random.Random(5))
    M = rec.whiten_involution(t)
    assert rec.whiten_involution(t) is M
    assert rec.whiten_involution(Y.mul(t, rec.z)) is M
    assert proj_eq(K, mul2(K, M, M), identity2(K))
    assert rec.audit() == 0


@pytest.mark.parametrize("q", [7, 9, 25, 1009, 2147483647])
def test_theta_round_trips(q):
    P = proxy_for(q, "sl2", seed=1)
    K, Y, rec = P.field, P.group, P.state
    rng = random.Random(q)
    for _ in range(15):
        y = Y.random(rng)
        X = rec.theta(y)
        assert K.eq(det2(K, X), K.one)
        assert rec.psi(X) == y
        A = random_sl2(K, rng)
        assert mat_eq(K, rec.theta(rec.psi(A)), A)


@pytest.mark.parametrize("flavor", ["psl2", "pgl2"])
@pytest.mark.parametrize("q", [7, 11, 25, 1009])
def test_projective_proxies(flavor, q):
    P = proxy_for(q, flavor)
    K, Y = P.field, P.group
    rng = random.Random(q)
    for _ in range(20):
        A, B = P.random_matrix(rng), P.random_matrix(rng)
        assert Y.mul(P.forward(A), P.forward(B)) == P.forward(mul2(K, A, B))
        assert P.same_matrix(P.backward(P.forward(A)), A)
        y = Y.random(rng)
        assert P.forward(P.backward(y)) == y


def test_pgl2_proxy_reaches_non_squares():
    P = proxy_for(11, "pgl2")
    K = P.field
    ns = K.find_nonsquare()
    D = (ns, K.zero, K.zero, K.one)
    x = P.forward(D)
    assert P.same_matrix(P.backward(x), D)
    # an element with non-square determinant is outside the image of SL2
    assert all(not P.group.eq(x, P.forward(random_sl2(K, random.Random(i)))) for i in range(30))


@pytest.mark.parametrize("mode", ["padded"])
def test_padded_exponent_recognition(mode):
    G = SimulatedGroup(25, "sl2", seed=7, exponent_mode=mode)
    P = build_sl2_proxy(build_adjoint_bundle(G), random.Random(0))
    rng = random.Random(1)
    for _ in range(10):
        y = G.random(rng)
        assert P.forward(P.backward(y)) == y


def test_sl2_proxy_refuses_centerless_box():
    with pytest.raises(FlavorError):
        build_sl2_proxy(build_adjoint_bundle(SimulatedGroup(7, "psl2")), random.Random(0))


def test_retry_budget_exhaustion():
    G = SimulatedGroup(11, "psl2", seed=2)
    rec = Recognizer(build_adjoint_bundle(G), None, random.Random(0), whiten_retries=0, theta_retries=0)
    y = next(y for y in (G.random(random.Random(i)) for i in range(50)) if not G.is_identity(y))
    with pytest.raises(WhiteningExhausted):
        rec.theta_bar(y)


def test_theta_bar_identity_and_inverse_matrix():
    P = proxy_for(11, "psl2")
    rec, K, Y = P.state, P.field, P.group
    assert mat_eq(K, rec.theta_bar(Y.identity), identity2(K))
    y = Y.random(random.Random(8))
    X = rec.theta_bar(y)
    assert proj_eq(K, rec.theta_bar(Y.inv(y)), inv2(K, X))


def test_view_is_consistent():
    P = proxy_for(7, "sl2")
    view = P.state.view
    assert isinstance(view, CenterQuotientView)
    assert view.eq(P.state.z, P.group.identity)
