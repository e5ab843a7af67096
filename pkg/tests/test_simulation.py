import random

import pytest

from sl2proxy.simulation import (ConfigError, FeistelEncoder, InvalidHandle, SimulatedField,
                                 SimulatedGroup, WhiteboxAccessError, check_field_order,
                                 derive_key, group_order, load_instance, save_instance, whitebox)


@pytest.mark.parametrize("q", [4, 5, 3, 6, 2, 15])
def test_rejects_unsupported_orders(q):
    with pytest.raises(ConfigError):
        check_field_order(q)
    with pytest.raises(ConfigError):
        SimulatedGroup(q)


def test_unknown_flavor():
    with pytest.raises(ConfigError):
        SimulatedGroup(7, "gl2")


def test_feistel_is_a_permutation():
    enc = FeistelEncoder(derive_key(1, "t"), 8)
    images = {enc.encode(x) for x in range(3000)}
    assert len(images) == 3000
    fresh = FeistelEncoder(derive_key(1, "t"), 8)
    assert all(fresh.decode(enc.encode(x)) == x for x in range(0, 3000, 7))


def test_handles_are_opaque_and_deterministic():
    a, b = SimulatedField(7, seed=1), SimulatedField(7, seed=1)
    c = SimulatedField(7, seed=2)
    assert a.one == b.one and a.zero == b.zero
    assert a.one != c.one
    with whitebox():
        assert [a.encode(x) for x in range(7)] == [b.encode(x) for x in range(7)]


def test_decode_requires_whitebox():
    K = SimulatedField(7)
    with pytest.raises(WhiteboxAccessError):
        K.decode(K.one)
    with pytest.raises(WhiteboxAccessError):
        K.plain
    G = SimulatedGroup(7)
    with pytest.raises(WhiteboxAccessError):
        G.decode(G.identity)
    with whitebox():
        assert G.decode(G.identity) == (1, 0, 0, 1)
    with pytest.raises(WhiteboxAccessError):
        G.encode((1, 0, 0, 1))


def test_forged_handle_rejected():
    K = SimulatedField(7, seed=0)
    bogus = None
    for i in range(2000):
        h = i.to_bytes(K.handle_width, "big")
        try:
            K.add(h, K.one)
        except InvalidHandle:
            bogus = h
            break
    assert bogus is not None
    with pytest.raises(InvalidHandle):
        K.mul(bogus, bogus)
    with pytest.raises(InvalidHandle):
        K.add(b"short", K.one)


@pytest.mark.parametrize("flavor", ["sl2", "psl2", "pgl2"])
def test_group_element_counts(flavor):
    G = SimulatedGroup(7, flavor, seed=4)
    with whitebox():
        elements = list(G.elements())
    assert len(elements) == group_order(7, flavor) == {"sl2": 336, "psl2": 168, "pgl2": 336}[flavor]


@pytest.mark.parametrize("flavor", ["sl2", "psl2", "pgl2"])
def test_group_is_associative_with_inverses(flavor):
    G = SimulatedGroup(11, flavor, seed=4)
    rng = random.Random(0)
    for _ in range(100):
        x, y, z = (G.random(rng) for _ in range(3))
        assert G.eq(G.mul(G.mul(x, y), z), G.mul(x, G.mul(y, z)))
        assert G.is_identity(G.mul(x, G.inv(x)))
        assert G.is_identity(G.pow(x, G.exponent))


def test_projective_canonical_forms():
    P = SimulatedGroup(7, "psl2", seed=0)
    X = SimulatedGroup(7, "pgl2", seed=0)
    with whitebox():
        assert P.encode((1, 1, 0, 1)) == P.encode((6, 6, 0, 6))
        assert X.encode((2, 0, 0, 3)) == X.encode((4, 0, 0, 6))
        with pytest.raises(ValueError):
            P.encode((2, 0, 0, 3))


def test_instance_roundtrip(tmp_path):
    G = SimulatedGroup(25, "psl2", seed=8, exponent_mode="padded")
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    save_instance(p1, G)
    save_instance(p2, SimulatedGroup(25, "psl2", seed=8, exponent_mode="padded"))
    assert p1.read_bytes() == p2.read_bytes()
    text = p1.read_text()
    assert '"q"' not in text
    H = load_instance(p1)
    assert H.identity == G.identity and H.exponent == G.exponent
    rng1, rng2 = random.Random(1), random.Random(1)
    assert G.random(rng1) == H.random(rng2)


def test_instance_schema_checked(tmp_path):
    p = tmp_path / "x.json"
    p.write_text('{"schema": "other"}')
    with pytest.raises(ConfigError):
        load_instance(p)


def test_padded_exponent_is_a_multiple():
    for seed in range(5):
        G = SimulatedGroup(13, "sl2", seed=seed, exponent_mode="padded")
        assert G.exponent % (13 * (13 * 13 - 1)) == 0
