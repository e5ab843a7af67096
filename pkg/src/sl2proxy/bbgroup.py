"""Black box groups with a global exponent.

Only multiplication, inversion, equality and random elements are
available.  Parity of element orders is read off the split E = 2**t * m of
the published exponent: y has odd order iff y**m == 1, and for even-order y
the involution of <y> is the last nontrivial term of y**m, y**(2m), ...
"""

from __future__ import annotations

import random
from collections import Counter

from .bbfield import split_exponent

GroupHandle = bytes

#: commuting samples used to accept a candidate central involution
CENTRALITY_SAMPLES = 32


class OddOrder(ValueError):
    """The element has odd order, so its cyclic group has no involution."""


class GroupExhausted(RuntimeError):
    """A randomized search ran out of retries."""


class GroupOps:
    """Derived operations shared by black box groups and their quotients."""

    split = None

    def mul(self, x, y):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    @property
    def identity(self):
        raise NotImplementedError

    def eq(self, x, y) -> bool:
        raise NotImplementedError

    def random(self, rng=None):
        raise NotImplementedError

    def is_identity(self, x) -> bool:
        return self.eq(x, self.identity)

    def prod(self, *xs):
        out = self.identity
        for x in xs:
            out = self.mul(out, x)
        return out

    def pow(self, x, n: int):
        if n < 0:
            x, n = self.inv(x), -n
        if n == 0:
            return self.identity
        result = x
        for bit in bin(n)[3:]:
            result = self.mul(result, result)
            if bit == "1":
                result = self.mul(result, x)
        return result

    def conj(self, x, g):
        """x**g = g^-1 x g."""
        return self.mul(self.mul(self.inv(g), x), g)

    def commutes(self, x, y) -> bool:
        return self.eq(self.mul(x, y), self.mul(y, x))

    def is_odd_order(self, y) -> bool:
        return self.is_identity(self.pow(y, self.split.m))

    def is_involution(self, y) -> bool:
        return not self.is_identity(y) and self.is_identity(self.mul(y, y))

    def extract_involution(self, y):
        """The involution of <y>; raises OddOrder for odd-order y."""
        x = self.pow(y, self.split.m)
        if self.is_identity(x):
            raise OddOrder
        for _ in range(self.split.t):
            x2 = self.mul(x, x)
            if self.is_identity(x2):
                return x
            x = x2
        raise GroupExhausted("element order exceeds the published exponent")

    def random_involution(self, rng=None, retries: int = 256):
        for _ in range(retries):
            try:
                return self.extract_involution(self.random(rng))
            except OddOrder:
                continue
        raise GroupExhausted("no even-order element found")


class BlackBoxGroup(GroupOps):
    """Base class: subclasses provide ``mul, inv, identity, random``."""

    def __init__(self, exponent: int, rng: random.Random | None = None):
        self.exponent = exponent
        self.split = split_exponent(exponent)
        self.rng = rng if rng is not None else random.Random(0)
        self.counts: Counter = Counter()

    def eq(self, x, y) -> bool:
        self.counts["eq"] += 1
        return x == y


class CenterQuotientView(GroupOps):
    """Y/Z(Y) for a central involution z; z=None means a trivial center.

    Handles are the handles of Y; only equality changes.
    """

    def __init__(self, group: BlackBoxGroup, z: GroupHandle | None):
        self.group = group
        self.z = z
        self.split = group.split
        self.exponent = group.exponent

    def mul(self, x, y):
        return self.group.mul(x, y)

    def inv(self, x):
        return self.group.inv(x)

    @property
    def identity(self):
        return self.group.identity

    def random(self, rng=None):
        return self.group.random(rng)

    def eq(self, x, y) -> bool:
        g = self.group
        if g.eq(x, y):
            return True
        if self.z is None:
            return False
        return g.eq(x, g.mul(y, self.z))

    eq_mod_center = eq


def find_central_involution(group: BlackBoxGroup, rng=None, samples: int = CENTRALITY_SAMPLES,
                            candidates: int = 8) -> GroupHandle | None:
    """Return an involution commuting with `samples` random elements, or None.

    Monte Carlo: a non-central involution of PSL2/PGL2(q) passes one
    commuting test with probability O(1/q**2).
    """
    rng = rng or group.rng
    for _ in range(candidates):
        try:
            t = group.random_involution(rng)
        except GroupExhausted:
            return None
        if all(group.commutes(t, group.random(rng)) for _ in range(samples)):
            return t
    return None
