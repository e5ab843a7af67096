"""Explicit finite fields GF(q) for odd prime powers q.

Elements are plain ints in ``range(q)``.  For prime q these are residues;
for q = p**k they are the base-p digit strings of polynomial coefficients
modulo a fixed irreducible polynomial.  This module is the ground truth
used by the simulators and by the brute-force test oracles; the black-box
algorithms never see it.
"""

from __future__ import annotations

from random import Random
from functools import cached_property

from sympy import factorint, isprime
from sympy.polys.domains import GF as SympyGF
from sympy.polys.galoistools import gf_irreducible_p


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, k) with q == p**k, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    f = factorint(q)
    if len(f) != 1:
        raise ValueError(f"{q} is not a prime power")
    ((p, k),) = f.items()
    return int(p), int(k)


def _find_irreducible(p: int, k: int) -> list[int]:
    # Deterministic: first monic irreducible in lexicographic order.
    dom = SympyGF(p)
    n = p**k
    for tail in range(n):
        coeffs = [1]
        t = tail
        digits = []
        for _ in range(k):
            digits.append(t % p)
            t //= p
        coeffs += digits[::-1]
        if coeffs[-1] == 0:
            continue
        if gf_irreducible_p(coeffs, p, dom):
            return coeffs
    raise ValueError(f"no irreducible polynomial of degree {k} over GF({p})")


class GF:
    """The field with q elements, q an odd prime power."""

    # exp/log tables are built for extension fields up to this size
    TABLE_LIMIT = 1 << 20

    def __init__(self, q: int):
        p, k = prime_power(q)
        if p == 2:
            raise ValueError("characteristic 2 is not supported")
        self.q = q
        self.p = p
        self.k = k
        if k > 1:
            if q > self.TABLE_LIMIT:
                raise ValueError(f"extension field GF({q}) too large for table arithmetic")
            self.modulus = _find_irreducible(p, k)
            self._build_tables()

    def __repr__(self):
        return f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, GF) and other.q == self.q

    def __hash__(self):
        return hash(("GF", self.q))

    # -- extension-field tables -------------------------------------------

    def _digits(self, x):
        out = []
        for _ in range(self.k):
            out.append(x % self.p)
            x //= self.p
        return out

    def _undigits(self, ds):
        x = 0
        for d in reversed(ds):
            x = x * self.p + d
        return x

    def _polymul(self, x, y):
        p, k = self.p, self.k
        a, b = self._digits(x), self._digits(y)
        prod = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        # modulus is monic, highest coefficient first
        low = self.modulus[1:][::-1]  # x**k == -sum(low[i] x**i)
        for deg in range(2 * k - 2, k - 1, -1):
            c = prod[deg]
            if c:
                prod[deg] = 0
                for i, li in enumerate(low):
                    prod[deg - k + i] = (prod[deg - k + i] - c * li) % p
        return self._undigits(prod[:k])

    def _build_tables(self):
        q = self.q
        order = q - 1
        primes = list(factorint(order))
        for g in range(2, q):
            # g has full order iff g**(order/r) != 1 for every prime r
            if all(self._slow_pow(g, order // r) != 1 for r in primes):
                break
        else:  # pragma: no cover - a primitive element always exists
            raise RuntimeError("no primitive element")
        exp = [0] * (2 * order)
        log = [0] * q
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = self._polymul(x, g)
        for i in range(order, 2 * order):
            exp[i] = exp[i - order]
        self._exp = exp
        self._log = log
        self.generator = g

    def _slow_pow(self, x, n):
        r = 1
        while n:
            if n & 1:
                r = self._polymul(r, x)
            x = self._polymul(x, x)
            n >>= 1
        return r

    # -- arithmetic --------------------------------------------------------

    def add(self, x, y):
        if self.k == 1:
            return (x + y) % self.q
        p = self.p
        a, b = self._digits(x), self._digits(y)
        return self._undigits([(u + v) % p for u, v in zip(a, b)])

    def neg(self, x):
        if self.k == 1:
            return -x % self.q
        p = self.p
        return self._undigits([-u % p for u in self._digits(x)])

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        if self.k == 1:
            return x * y % self.q
        if x == 0 or y == 0:
            return 0
        return self._exp[self._log[x] + self._log[y]]

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.k == 1:
            return pow(x, -1, self.q)
        return self._exp[(self.q - 1 - self._log[x]) % (self.q - 1)]

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def pow(self, x, n):
        if n < 0:
            x, n = self.inv(x), -n
        if self.k == 1:
            return pow(x, n, self.q)
        if x == 0:
            return 0 if n else 1
        return self._exp[self._log[x] * n % (self.q - 1)]

    def from_int(self, n):
        n %= self.p
        return n  # the prime subfield sits at the constant digit

    def random(self, rng: Random):
        return rng.randrange(self.q)

    def random_nonzero(self, rng: Random):
        return rng.randrange(1, self.q)

    def elements(self):
        return range(self.q)

    # -- squares -----------------------------------------------------------

    def is_square(self, x):
        if x == 0:
            return True
        return self.pow(x, (self.q - 1) // 2) == 1

    @cached_property
    def _nonsquare(self):
        for x in range(2, self.q):
            if not self.is_square(x):
                return x
        raise RuntimeError("no non-square")  # pragma: no cover

    def sqrt(self, x):
        """A square root of x, or None when x is not a square."""
        if x == 0:
            return 0
        if not self.is_square(x):
            return None
        if self.k > 1:
            return self._exp[self._log[x] // 2]
        q = self.q
        if q % 4 == 3:
            return pow(x, (q + 1) // 4, q)
        # Tonelli-Shanks with the exact group order
        s, m = 0, q - 1
        while m % 2 == 0:
            s, m = s + 1, m // 2
        c = pow(self._nonsquare, m, q)
        y = pow(x, (m + 1) // 2, q)
        b = pow(x, m, q)
        while b != 1:
            i, b2 = 0, b
            while b2 != 1:
                b2, i = b2 * b2 % q, i + 1
            g = pow(c, 1 << (s - i - 1), q)
            y, c = y * g % q, g * g % q
            b, s = b * c % q, i
        return y


def is_odd_prime_power(q: int) -> bool:
    try:
        p, _ = prime_power(q)
    except ValueError:
        return False
    return p != 2


def odd_prime_near(target: int) -> int:
    """Largest prime <= target (used for the benchmark ladder)."""
    n = target
    while n > 2 and not isprime(n):
        n -= 1
    return n
