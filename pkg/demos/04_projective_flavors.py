"""
PSL2 and PGL2 boxes
===================

Without a centre there is nothing to lift: PSL2 uses the forward map
modulo the centre and the same whitening for the inverse.  PGL2 needs no
whitening at all, since the adjoint data is two-way.
"""

# %%
import random

from sl2proxy.matlin import mul2
from sl2proxy.verify import build_proxy, check_group_round_trip, check_homomorphism
from sl2proxy.simulation import SimulatedGroup

rng = random.Random(2)
for flavor in ("psl2", "pgl2"):
    G = SimulatedGroup(1009, flavor, seed=2)
    P = build_proxy(G, rng)
    print(flavor, "homomorphism:", check_homomorphism(P, 50, rng))
    print(flavor, "round trip:", check_group_round_trip(P, 50, rng))

# %%
# PGL2 matrices with non-square determinant have no preimage in SL2, yet
# the PGL2 proxy handles them directly.
K = P.field
D = (K.find_nonsquare(), K.zero, K.zero, K.one)
print("diag(non-square, 1) survives the round trip:", P.same_matrix(P.backward(P.forward(D)), D))
print("and multiplies correctly:", P.forward(mul2(K, D, D)) == G.mul(P.forward(D), P.forward(D)))
