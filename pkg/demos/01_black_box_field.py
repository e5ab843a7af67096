"""
Arithmetic in a field you cannot see
====================================

A black box field hands out opaque byte strings.  We may add, multiply,
invert and compare them, and we are told one integer E with a**E == 1 for
every nonzero a.  That is enough to take square roots.
"""

# %%
# A simulated field of order 1009.  Handles are 8 random-looking bytes.
import random

from sl2proxy.bbfield import NotSquare
from sl2proxy.simulation import SimulatedField

K = SimulatedField(1009, seed=1)
rng = random.Random(0)
a = K.random_nonzero(rng)
print("a handle:", a.hex())
print("published exponent E =", K.exponent, "split as 2^%d * %d" % (K.split.t, K.split.m))

# %%
# Square roots come from Tonelli-Shanks driven only by E.  A non-square is
# certified once per field from the 2-power order of random elements.
r = K.sqrt(K.mul(a, a))
print("sqrt(a^2) is +-a:", K.eq(r, a) or K.eq(r, K.neg(a)))
ns = K.find_nonsquare()
try:
    K.sqrt(ns)
except NotSquare:
    print("the cached non-square has no root, as expected")

# %%
# The quadratic character is one power, far cheaper than a root.
before = sum(K.counts.values())
K.is_square(a)
print("ops for is_square:", sum(K.counts.values()) - before)

# %%
# Every odd-characteristic field has a, b with a^2 + b^2 = -1.
x, y = K.two_squares_minus_one(rng)
print("a^2 + b^2 == -1:", K.eq(K.add(K.mul(x, x), K.mul(y, y)), K.neg(K.one)))
