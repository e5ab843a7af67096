"""The isomorphism PGL2(K) -> SO3_flat(K) and its inverse.

The adjoint matrix of A = [[a,b],[c,d]] with respect to the basis E, W, F
of trace-zero matrices is

    delta * [[a^2, 2ac, c^2], [ab, ad+bc, cd], [b^2, 2bd, d^2]],  delta = 1/det A.

Written in column coordinates for X -> A^-1 X A this reverses products,
so ``phi`` evaluates it at A^t, which is multiplicative.  The inverse
recovers eps*A from one square root without ever learning delta or eps.
"""

from __future__ import annotations

from .bbfield import BlackBoxField
from .matlin import Mat2, Mat3, det2, mat_eq, transpose2


class MalformedInput(ValueError):
    """The 3x3 matrix is not the adjoint image of any 2x2 matrix."""


def adjoint_matrix(K: BlackBoxField, A: Mat2) -> Mat3:
    """delta * [[a^2, 2ac, c^2], ...]; note adjoint_matrix(AB) == adjoint_matrix(B) adjoint_matrix(A)."""
    a, b, c, d = A
    delta = K.inv(det2(K, A))
    mul = K.mul
    two = K.integer(2)
    ad_bc = K.add(mul(a, d), mul(b, c))
    raw = (mul(a, a), mul(two, mul(a, c)), mul(c, c),
           mul(a, b), ad_bc, mul(c, d),
           mul(b, b), mul(two, mul(b, d)), mul(d, d))
    return tuple(mul(delta, x) for x in raw)


def phi(K: BlackBoxField, A: Mat2) -> Mat3:
    """Homomorphism GL2(K) -> SO3_flat(K) with kernel the scalars."""
    return adjoint_matrix(K, transpose2(A))


# pivot position in the flat 3x3 tuple, tried in this order
_PIVOTS = (0, 8, 2, 6)


def adjoint_preimage(K: BlackBoxField, B: Mat3) -> Mat2:
    """eps * A with adjoint_matrix(A) == B, using exactly one square root.

    B is first scaled by gamma in {1, a fixed non-square} so that the pivot
    entry becomes a square; gamma*delta is then a square eps^2 and the
    scaled entries are quadratic in (a eps, b eps, c eps, d eps).
    """
    b11, b12, b13, b21, b22, b23, b31, b32, b33 = B
    pivot = next((i for i in _PIVOTS if not K.is_zero(B[i])), None)
    if pivot is None:
        raise MalformedInput("all corner entries vanish")
    gamma = K.one if K.is_square(B[pivot]) else K.find_nonsquare()
    b12, b13, b21, b22, b23, b31, b32, b11, b33 = (
        K.mul(gamma, x) for x in (b12, b13, b21, b22, b23, b31, b32, b11, b33))
    two = K.integer(2)
    div, mul, sub = K.div, K.mul, K.sub
    if pivot == 0:
        a = K.sqrt(b11)
        b = div(b21, a)
        c = div(b12, mul(two, a))
        d = div(sub(b22, mul(b, c)), a)
    elif pivot == 8:
        d = K.sqrt(b33)
        b = div(b32, mul(two, d))
        c = div(b23, d)
        a = div(sub(b22, mul(b, c)), d)
    elif pivot == 2:
        c = K.sqrt(b13)
        a = div(b12, mul(two, c))
        d = div(b23, c)
        b = div(sub(b22, mul(a, d)), c)
    else:
        b = K.sqrt(b31)
        a = div(b21, b)
        d = div(b32, mul(two, b))
        c = div(sub(b22, mul(a, d)), b)
    A = (a, b, c, d)
    if K.is_zero(det2(K, A)) or not mat_eq(K, adjoint_matrix(K, A), B):
        raise MalformedInput("matrix is not in SO3_flat")
    return A


def phi_inv(K: BlackBoxField, B: Mat3) -> Mat2:
    """A representative of the PGL2(K) element mapped to B by ``phi``."""
    return transpose2(adjoint_preimage(K, B))
