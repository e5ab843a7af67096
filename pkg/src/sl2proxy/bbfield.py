"""Black box fields and square roots that only know a global exponent.

A black box field hands out opaque handles (byte strings) and offers
add/mul/neg/inv/equality on them, plus a published integer E with
``a**E == 1`` for every nonzero a.  E is only promised to be a multiple
of the true order of the multiplicative group, so square roots are taken
with a Tonelli-Shanks variant driven by the split E = 2**t * m.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass

FieldHandle = bytes

#: independent samples used to certify a non-square (error <= 2**-40)
NONSQUARE_SAMPLES = 40


class NotSquare(ArithmeticError):
    """The element has no square root (probabilistic certificate)."""


class FieldExhausted(RuntimeError):
    """A randomized search ran out of retries; the black box is inconsistent."""


@dataclass(frozen=True)
class ExponentSplit:
    t: int
    m: int

    def __post_init__(self):
        if self.m % 2 == 0 or self.m < 1 or self.t < 0:
            raise ValueError(f"bad exponent split t={self.t}, m={self.m}")

    @property
    def exponent(self) -> int:
        return self.m << self.t


def split_exponent(E: int) -> ExponentSplit:
    """Write E = 2**t * m with m odd."""
    if E < 1:
        raise ValueError("exponent must be positive")
    t = (E & -E).bit_length() - 1
    return ExponentSplit(t, E >> t)


@dataclass(frozen=True)
class _TwoSylow:
    nonsquare: FieldHandle
    generator: FieldHandle  # nonsquare**m, generates the 2-part of K*
    rank: int  # generator has order exactly 2**rank


class BlackBoxField:
    """Base class: subclasses provide the primitive operations.

    Primitives: ``add, neg, mul, inv, zero, one, random`` and the attribute
    ``exponent``.  Everything else is derived here from the primitives only.
    """

    exponent: int

    def __init__(self, exponent: int, rng: random.Random | None = None):
        self.exponent = exponent
        self.split = split_exponent(exponent)
        self.rng = rng if rng is not None else random.Random(0)
        self.counts: Counter = Counter()
        self._sylow: _TwoSylow | None = None
        self._ints: dict[int, FieldHandle] = {}

    # -- primitives (overridden) -------------------------------------------

    def add(self, a: FieldHandle, b: FieldHandle) -> FieldHandle:
        raise NotImplementedError

    def neg(self, a: FieldHandle) -> FieldHandle:
        raise NotImplementedError

    def mul(self, a: FieldHandle, b: FieldHandle) -> FieldHandle:
        raise NotImplementedError

    def inv(self, a: FieldHandle) -> FieldHandle:
        raise NotImplementedError

    @property
    def zero(self) -> FieldHandle:
        raise NotImplementedError

    @property
    def one(self) -> FieldHandle:
        raise NotImplementedError

    def random(self, rng: random.Random | None = None) -> FieldHandle:
        raise NotImplementedError

    # -- derived -----------------------------------------------------------

    def eq(self, a: FieldHandle, b: FieldHandle) -> bool:
        self.counts["eq"] += 1
        return a == b

    def is_zero(self, a: FieldHandle) -> bool:
        return self.eq(a, self.zero)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def square(self, a):
        return self.mul(a, a)

    def random_nonzero(self, rng=None):
        while True:
            a = self.random(rng)
            if not self.is_zero(a):
                return a

    def integer(self, n: int) -> FieldHandle:
        """Image of the integer n under Z -> K (double-and-add from one)."""
        if n in self._ints:
            return self._ints[n]
        k = abs(n)
        acc, base = self.zero, self.one
        while k:
            if k & 1:
                acc = self.add(acc, base)
            base = self.add(base, base)
            k >>= 1
        res = self.neg(acc) if n < 0 else acc
        if -64 <= n <= 64:
            self._ints[n] = res
        return res

    def pow(self, a: FieldHandle, n: int) -> FieldHandle:
        if n < 0:
            a, n = self.inv(a), -n
        if n == 0:
            return self.one
        # left-to-right square-and-multiply
        result = a
        for bit in bin(n)[3:]:
            result = self.mul(result, result)
            if bit == "1":
                result = self.mul(result, a)
        return result

    # -- square roots --------------------------------------------------------

    def _two_sylow(self) -> _TwoSylow:
        """Find z whose m-th power generates the 2-part of K*.

        z**m has maximal 2-power order exactly when z is a non-square, so the
        best of NONSQUARE_SAMPLES random draws is a non-square unless every
        draw was a square.
        """
        if self._sylow is not None:
            return self._sylow
        m = self.split.m
        best = None
        for _ in range(NONSQUARE_SAMPLES):
            z = self.random_nonzero(self.rng)
            c = self.pow(z, m)
            rank, x = 0, c
            while not self.eq(x, self.one):
                x = self.mul(x, x)
                rank += 1
                if rank > self.split.t:
                    raise FieldExhausted("element order exceeds the published exponent")
            if best is None or rank > best.rank:
                best = _TwoSylow(z, c, rank)
        if best.rank == 0:
            raise FieldExhausted("no non-square found; is the characteristic odd?")
        self._sylow = best
        return best

    def sqrt(self, a: FieldHandle) -> FieldHandle:
        """Square root of a via Tonelli-Shanks over the split of E.

        Raises NotSquare if a has no square root.  A returned root is always
        verified, so success answers are never wrong.
        """
        self.counts["sqrt"] += 1
        if self.is_zero(a):
            return self.zero
        syl = self._two_sylow()
        m = self.split.m
        w = self.pow(a, (m - 1) // 2)
        x = self.mul(w, a)  # a**((m+1)/2)
        b = self.mul(w, x)  # a**m, lies in the 2-part
        c, rank = syl.generator, syl.rank
        while not self.eq(b, self.one):
            i, b2 = 0, b
            while not self.eq(b2, self.one):
                b2 = self.mul(b2, b2)
                i += 1
                if i >= rank:
                    raise NotSquare
            g = c
            for _ in range(rank - i - 1):
                g = self.mul(g, g)
            x = self.mul(x, g)
            c = self.mul(g, g)
            b = self.mul(b, c)
            rank = i
        if not self.eq(self.mul(x, x), a):
            raise FieldExhausted("square root failed verification")
        return x

    def is_square(self, a: FieldHandle) -> bool:
        """Quadratic character through the 2-part of K*.

        Agrees with ``sqrt`` succeeding, but costs one power instead of a
        full root extraction.
        """
        if self.is_zero(a):
            return True
        syl = self._two_sylow()
        b = self.pow(a, self.split.m)
        for _ in range(syl.rank - 1):
            b = self.mul(b, b)
        return self.eq(b, self.one)

    def find_nonsquare(self) -> FieldHandle:
        return self._two_sylow().nonsquare

    def two_squares_minus_one(self, rng=None, retries: int = 200):
        """Return (a, b) with a*a + b*b == -1."""
        rng = rng or self.rng
        minus_one = self.neg(self.one)
        if self.is_square(minus_one):
            return self.sqrt(minus_one), self.zero
        for _ in range(retries):
            a = self.random(rng)
            r = self.sub(minus_one, self.mul(a, a))
            if self.is_square(r):
                return a, self.sqrt(r)
        raise FieldExhausted("no solution of a^2 + b^2 = -1 found")
