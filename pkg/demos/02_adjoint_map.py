"""
PGL2 as an orthogonal group
===========================

Conjugation on trace-zero 2x2 matrices gives a homomorphism
phi: GL2(K) -> SO3(K) with kernel the scalars.  It is inverted with a
single square root.  A change of basis moves the image from the form
with Gram matrix J to the identity form.
"""

# %%
import random

from sl2proxy.forms import build_change_of_basis, in_SO_flat, in_SO_sharp
from sl2proxy.matlin import mat_eq, mul2, mul3, proj_eq
from sl2proxy.pgl2_so3 import phi, phi_inv
from sl2proxy.recognition import random_gl2
from sl2proxy.simulation import SimulatedField, whitebox

K = SimulatedField(7, seed=0)
rng = random.Random(1)

# %%
# diag(2, 4) over F7 goes to diag(4, 1, 2).  Reading handles back needs a
# whitebox scope; the algorithms themselves never do this.
with whitebox():
    two, four = K.encode(2), K.encode(4)
    D = phi(K, (two, K.zero, K.zero, four))
    print("phi(diag(2,4)) =", [K.decode(x) for x in D])

# %%
# phi is multiplicative and phi_inv recovers A up to a scalar.
A, B = random_gl2(K, rng), random_gl2(K, rng)
print("phi(AB) == phi(A) phi(B):", mat_eq(K, phi(K, mul2(K, A, B)), mul3(K, phi(K, A), phi(K, B))))
print("phi_inv(phi(A)) ~ A:", proj_eq(K, phi_inv(K, phi(K, A)), A))
print("image preserves J:", in_SO_flat(K, phi(K, A)))

# %%
# The spinor basis from a^2 + b^2 = -1 turns J into 2I.
cob = build_change_of_basis(K, rng)
N = cob.flat_to_sharp(phi(K, A))
print("orthogonal in the spinor basis:", in_SO_sharp(K, N))
print("and back:", mat_eq(K, cob.sharp_to_flat(N), phi(K, A)))
