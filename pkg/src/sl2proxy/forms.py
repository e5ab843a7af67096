"""Orthogonal groups of a ternary form in spinor and canonical coordinates.

O_sharp preserves the identity Gram matrix (M^t M = I); O_flat preserves
J = [[0,0,1],[0,-2,0],[1,0,0]] (M^t J M = J).  A pair a, b with
a^2 + b^2 = -1 gives the change of basis P between the two; matrices act
on column coordinates, so a transformation with canonical matrix M has
spinor matrix (P^t)^-1 M P^t.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bbfield import BlackBoxField, FieldHandle
from .matlin import Mat2, Mat3, det3, identity3, mat_eq, mul2, mul3, scalar_mul, transpose3


class DomainError(ValueError):
    """Input matrix is not in the group the map is defined on."""


def form_matrix_J(K: BlackBoxField) -> Mat3:
    z, o = K.zero, K.one
    return (z, z, o, z, K.integer(-2), z, o, z, z)


def in_O_sharp(K, M: Mat3) -> bool:
    return mat_eq(K, mul3(K, transpose3(M), M), identity3(K))


def in_O_flat(K, M: Mat3) -> bool:
    J = form_matrix_J(K)
    return mat_eq(K, mul3(K, mul3(K, transpose3(M), J), M), J)


def in_SO_flat(K, M: Mat3) -> bool:
    return in_O_flat(K, M) and K.eq(det3(K, M), K.one)


def in_SO_sharp(K, M: Mat3) -> bool:
    return in_O_sharp(K, M) and K.eq(det3(K, M), K.one)


def canonical_triple(K) -> tuple[Mat2, Mat2, Mat2]:
    """E, W, F: a basis of trace-zero 2x2 matrices with Gram matrix J
    under beta(U, V) = -Tr(UV)."""
    z, o = K.zero, K.one
    m1 = K.neg(o)
    return (z, z, m1, z), (o, z, z, m1), (z, o, z, z)


def spinor_triple(K, a: FieldHandle, b: FieldHandle) -> tuple[Mat2, Mat2, Mat2]:
    """V1 = E + F, V2 = -bE + aW + bF, V3 = aE + bW - aF."""
    z, o = K.zero, K.one
    na, nb = K.neg(a), K.neg(b)
    return (z, o, K.neg(o), z), (a, b, b, na), (b, na, na, nb)


def beta(K, U: Mat2, V: Mat2) -> FieldHandle:
    """-Tr(UV)."""
    P = mul2(K, U, V)
    return K.neg(K.add(P[0], P[3]))


@dataclass(frozen=True)
class ChangeOfBasis:
    K: BlackBoxField
    a: FieldHandle
    b: FieldHandle
    P: Mat3
    Pt: Mat3
    Pt_inv: Mat3
    transposed: bool = False  # orientation fallback, see build_change_of_basis

    def flat_to_sharp(self, M: Mat3, check: bool = False) -> Mat3:
        K = self.K
        if check and not in_O_flat(K, M):
            raise DomainError("matrix does not preserve J")
        if self.transposed:
            return mul3(K, mul3(K, self.Pt, M), self.Pt_inv)
        return mul3(K, mul3(K, self.Pt_inv, M), self.Pt)

    def sharp_to_flat(self, M: Mat3, check: bool = False) -> Mat3:
        K = self.K
        if check and not in_O_sharp(K, M):
            raise DomainError("matrix is not orthogonal")
        if self.transposed:
            return mul3(K, mul3(K, self.Pt_inv, M), self.Pt)
        return mul3(K, mul3(K, self.Pt, M), self.Pt_inv)


def change_of_basis_matrix(K, a, b) -> Mat3:
    z, o = K.zero, K.one
    # rows are V1, V2, V3 in coordinates E, W, F
    return (o, z, o,
            K.neg(b), a, b,
            a, b, K.neg(a))


def _probe_flat_element(K) -> Mat3:
    # adjoint image of [[1,1],[1,2]]; integer entries, so it lies in SO_flat in every characteristic
    one, two = K.one, K.integer(2)
    return (one, two, one,
            one, K.integer(3), two,
            one, K.integer(4), K.integer(4))


def build_change_of_basis(K, rng=None) -> ChangeOfBasis:
    """Find a^2 + b^2 = -1 and the matrix P with P J P^t = 2I.

    When -1 is a square this is the epsilon form (a = sqrt(-1), b = 0).
    The conjugation orientation is self-checked on a probe element.
    """
    a, b = K.two_squares_minus_one(rng)
    P = change_of_basis_matrix(K, a, b)
    Pt = transpose3(P)
    J = form_matrix_J(K)
    two_I = scalar_mul(K, K.integer(2), identity3(K))
    if not mat_eq(K, mul3(K, mul3(K, P, J), Pt), two_I):
        raise DomainError("change of basis failed P J P^t = 2I")
    # P J P^t = 2I gives (P^t)^-1 = P J / 2 without a general inversion
    Pt_inv = scalar_mul(K, K.inv(K.integer(2)), mul3(K, P, J))
    cob = ChangeOfBasis(K, a, b, P, Pt, Pt_inv)
    probe = _probe_flat_element(K)
    if not in_O_sharp(K, cob.flat_to_sharp(probe)):
        cob = ChangeOfBasis(K, a, b, P, Pt, Pt_inv, transposed=True)
        if not in_O_sharp(K, cob.flat_to_sharp(probe)):
            raise DomainError("neither conjugation orientation maps O_flat into O_sharp")
    return cob
