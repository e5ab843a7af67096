import random

import pytest
from sympy import isprime

from sl2proxy.plainfield import GF, is_odd_prime_power, odd_prime_near, prime_power


@pytest.mark.parametrize("q,expected", [(7, (7, 1)), (25, (5, 2)), (27, (3, 3)), (1009, (1009, 1))])
def test_prime_power(q, expected):
    assert prime_power(q) == expected


@pytest.mark.parametrize("q", [6, 12, 1])
def test_prime_power_rejects_composites(q):
    with pytest.raises(ValueError):
        prime_power(q)


def test_odd_prime_power_predicate():
    assert is_odd_prime_power(9) and is_odd_prime_power(7)
    assert not is_odd_prime_power(8) and not is_odd_prime_power(15)


def test_odd_prime_near_ladder():
    assert odd_prime_near(2**10) == 1021
    assert odd_prime_near(2**20) == 1048573
    assert odd_prime_near(2**30) == 1073741789
    assert all(isprime(odd_prime_near(n)) for n in (100, 5000))


@pytest.mark.parametrize("q", [7, 9, 25, 27, 49])
def test_field_axioms_exhaustive(q):
    F = GF(q)
    els = list(F.elements())
    assert len(els) == q
    for x in els:
        assert F.add(x, F.neg(x)) == 0
        if x:
            assert F.mul(x, F.inv(x)) == 1
            assert F.pow(x, q - 1) == 1
    rng = random.Random(0)
    for _ in range(200):
        a, b, c = (F.random(rng) for _ in range(3))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))


@pytest.mark.parametrize("q", [7, 13, 25, 1009])
def test_plain_squares(q):
    F = GF(q)
    squares = {F.mul(x, x) for x in F.elements()}
    assert len(squares) == (q + 1) // 2
    for x in list(F.elements())[:300]:
        r = F.sqrt(x)
        assert (r is not None) == (x in squares) == F.is_square(x)
        if r is not None:
            assert F.mul(r, r) == x
