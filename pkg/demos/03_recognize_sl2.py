"""
Recognizing a black box SL2
===========================

Given a black box group Y that secretly is SL2(q), together with the
adjoint data (a black box field K, a map from SO3(K) onto Y/Z(Y) and two
tori whose elements we can read back), build mutually inverse maps
psi: SL2(K) -> Y and theta: Y -> SL2(K).
"""

# %%
import random

from sl2proxy.matlin import det2, mat_eq, mul2
from sl2proxy.oracle import build_adjoint_bundle
from sl2proxy.recognition import build_sl2_proxy, random_sl2, transvection_decompose
from sl2proxy.simulation import SimulatedGroup

Y = SimulatedGroup(65521, "sl2", seed=4)
bundle = build_adjoint_bundle(Y)
rng = random.Random(4)
proxy = build_sl2_proxy(bundle, rng)
rec = proxy.state
K = proxy.field
print("central involution found:", rec.z.hex())

# %%
# Forward: split x into transvections, map each modulo the centre and keep
# the odd-order element of its coset.  The lift is a true homomorphism.
x, w = random_sl2(K, rng), random_sl2(K, rng)
print("factors of x:", len(transvection_decompose(K, x)))
print("psi(xw) == psi(x) psi(w):", proxy.forward(mul2(K, x, w)) == Y.mul(proxy.forward(x), proxy.forward(w)))

# %%
# Backward: conjugation by the unknown matrix maps white involutions to
# whitened involutions, a linear condition on four unknowns.
y = Y.random(rng)
X = proxy.backward(y)
print("det theta(y) == 1:", K.eq(det2(K, X), K.one))
print("psi(theta(y)) == y exactly:", proxy.forward(X) == y)
print("theta(psi(x)) == x exactly:", mat_eq(K, proxy.backward(proxy.forward(x)), x))
print("whitened involutions cached:", len(rec.cache), "audit failures:", rec.audit())

# %%
# Operation tallies of everything so far.
print("group ops:", dict(Y.counts))
print("field ops:", dict(K.counts))
