"""Two-way isomorphisms between a black box group and SL2/PSL2/PGL2(K).

Forward:  SL2(K) -> PSL2(K) -> SO3_flat(K) -> SO3_sharp(K) -> Y/Z(Y) is
``psi_bar`` (adjoint map, change of basis, then the adjoint bundle).  It is
lifted to ``psi``: SL2(K) -> Y by writing x as a product of transvections
and taking, for each, the odd-order element of its center coset.

Backward: an element of Y/Z(Y) is *white* once a matrix with the same
image is known.  Elements of the white tori are white by construction,
then normalizers of tori, centralizers of white involutions, every
involution, and finally every element (``theta_bar``).  ``theta`` picks
the sign of the matrix by comparing psi with y exactly in Y.

This module only talks to the black boxes and to the adjoint bundle.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable

from .bbfield import BlackBoxField
from .bbgroup import CenterQuotientView, OddOrder, find_central_involution
from .forms import ChangeOfBasis, build_change_of_basis
from .matlin import (Mat2, commutation_rows, det2, identity2, inv2, mat_eq, mat_neg,
                     mul2, nullspace, proj_eq, scalar_mul)
from .pgl2_so3 import phi, phi_inv

#: random white involutions tried before giving up on one involution
WHITEN_RETRIES = 64
#: attempts of the conjugation-equation solve in theta_bar
THETA_RETRIES = 32


class RecognitionError(RuntimeError):
    """Base class; signals an inconsistent black box or oracle."""


class LiftError(RecognitionError):
    pass


class NotInNormalizer(RecognitionError):
    pass


class ConjugacyError(RecognitionError):
    pass


class WhiteningExhausted(RecognitionError):
    pass


class FlavorError(RecognitionError):
    pass


# --------------------------------------------------------------------------
# matrices over K


def random_gl2(K: BlackBoxField, rng) -> Mat2:
    while True:
        X = tuple(K.random(rng) for _ in range(4))
        if not K.is_zero(det2(K, X)):
            return X


def random_sl2(K: BlackBoxField, rng) -> Mat2:
    """Uniform element of SL2(K): scale the first row of a random GL2 matrix."""
    a, b, c, d = X = random_gl2(K, rng)
    di = K.inv(det2(K, X))
    return (K.mul(a, di), K.mul(b, di), c, d)


def normalize_sl2(K: BlackBoxField, X: Mat2) -> Mat2:
    """Scale X to determinant 1; raises NotSquare if det X is not a square."""
    r = K.sqrt(det2(K, X))
    return scalar_mul(K, K.inv(r), X)


def transvection_decompose(K: BlackBoxField, x: Mat2) -> list[Mat2]:
    """Write x in SL2(K) as a product of at most 4 unitriangular matrices."""
    a, b, c, d = x
    one, zero = K.one, K.zero
    if mat_eq(K, x, identity2(K)):
        return []

    def upper(t):
        return (one, t, zero, one)

    def lower(t):
        return (one, zero, t, one)

    if not K.is_zero(c):
        ci = K.inv(c)
        return [upper(K.mul(K.sub(a, one), ci)), lower(c), upper(K.mul(K.sub(d, one), ci))]
    if not K.is_zero(b):
        bi = K.inv(b)
        return [lower(K.mul(K.sub(d, one), bi)), upper(b), lower(K.mul(K.sub(a, one), bi))]
    ai = K.inv(a)
    return [lower(K.sub(ai, one)), upper(one), lower(K.sub(a, one)), upper(K.neg(ai))]


def _combinations(K, basis, rng):
    """Elements of span(basis): the basis vectors, their sum, then random mixes."""
    yield from basis
    if len(basis) < 2:
        return
    yield tuple(K.add(u, v) for u, v in zip(basis[0], basis[1]))
    while True:
        lam, mu = K.random(rng), K.random(rng)
        yield tuple(K.add(K.mul(lam, u), K.mul(mu, v)) for u, v in zip(basis[0], basis[1]))


def _special_in_span(K, basis, rng, tries=64):
    """A determinant-1 matrix in the span of a 2-dimensional solution space."""
    for X in itertools.islice(_combinations(K, basis, rng), tries):
        d = det2(K, X)
        if not K.is_zero(d) and K.is_square(d):
            return normalize_sl2(K, X)
    return None


# --------------------------------------------------------------------------
# white state


@dataclass
class WhiteTorus:
    name: str
    generator: bytes
    matrix: Mat2
    inverter: tuple | None = None  # (u handle, U matrix)


class Recognizer:
    """Builds psi_bar/psi/theta_bar/theta from an adjoint bundle.

    ``z`` is the central involution of Y, or None when Y has trivial center
    (the PSL2 case).  The whitened-involution cache is single-writer.
    """

    def __init__(self, bundle, z=None, rng: random.Random | None = None,
                 whiten_retries: int = WHITEN_RETRIES, theta_retries: int = THETA_RETRIES):
        self.whiten_retries = whiten_retries
        self.theta_retries = theta_retries
        self.bundle = bundle
        self.K: BlackBoxField = bundle.field
        self.Y = bundle.group
        self.z = z
        self.view = CenterQuotientView(self.Y, z)
        self.rng = rng or random.Random()
        self.cob: ChangeOfBasis = build_change_of_basis(self.K, self.rng)
        self.tori = {}
        for name in bundle.seed_names:
            gen = bundle.seed_generator(name)
            self.tori[name] = WhiteTorus(name, gen, self.seed_matrix(name, gen))
        # the involution of the white torus R and its matrix
        self.s = self.view.extract_involution(self.tori["R"].generator)
        self.sigma = self.seed_matrix("R", self.s)
        self.cache: dict[bytes, Mat2] = {}
        for name in self.tori:
            self._inverter(name)

    # -- forward -----------------------------------------------------------

    def psi_bar(self, x: Mat2) -> bytes:
        """SL2(K) -> Y, a homomorphism modulo Z(Y)."""
        K = self.K
        return self.bundle.forward(self.cob.flat_to_sharp(phi(K, x)))

    def _lift(self, y):
        Y = self.Y
        r = Y.pow(y, Y.split.m)
        if Y.eq(r, Y.identity):
            return y
        if self.z is not None and Y.eq(r, self.z):
            return Y.mul(y, self.z)
        raise LiftError("no odd-order element in the center coset of a transvection image")

    def psi(self, x: Mat2) -> bytes:
        """The unique lift of psi_bar to a homomorphism SL2(K) -> Y."""
        K, Y = self.K, self.Y
        if self.z is None:
            return self.psi_bar(x)
        out = Y.identity
        for f in transvection_decompose(K, x):
            if mat_eq(K, f, identity2(K)):
                continue
            out = Y.mul(out, self._lift(self.psi_bar(f)))
        return out

    # -- white tori ----------------------------------------------------------

    def seed_matrix(self, name: str, y) -> Mat2:
        """Matrix preimage of an element of a white torus."""
        K = self.K
        N = self.bundle.seed_backward(name, y)
        return normalize_sl2(K, phi_inv(K, self.cob.sharp_to_flat(N)))

    def _inverter(self, name: str):
        """An involution u in N(T) outside T, with its matrix."""
        T = self.tori[name]
        if T.inverter is None:
            K = self.K
            M = T.matrix
            basis = nullspace(K, commutation_rows(K, M, inv2(K, M)))
            U = _special_in_span(K, basis, self.rng)
            if U is None:
                raise ConjugacyError(f"no inverting involution found for torus {name}")
            T.inverter = (self.psi_bar(U), U)
        return T.inverter

    def whiten_NS(self, y, torus: str = "S") -> Mat2:
        """Matrix of an element of the normalizer of a white torus."""
        K, Y, view = self.K, self.Y, self.view
        T = self.tori[torus]
        if view.commutes(y, T.generator):
            return self.seed_matrix(torus, y)
        u, U = self._inverter(torus)
        uy = Y.mul(u, y)
        if not view.commutes(uy, T.generator):
            raise NotInNormalizer(f"element does not normalize torus {torus}")
        return mul2(K, inv2(K, U), self.seed_matrix(torus, uy))

    def _conjugator(self, alpha: Mat2) -> Mat2:
        """g in SL2(K) with g^-1 sigma g = alpha up to sign."""
        K = self.K
        for sign in (1, -1):
            basis = nullspace(K, commutation_rows(K, self.sigma, alpha, sign))
            if len(basis) == 2:
                g = _special_in_span(K, basis, self.rng)
                if g is not None:
                    return g
        raise ConjugacyError("involution matrices are not conjugate")

    def whiten_centralizer(self, a, alpha: Mat2, y, conjugator: Mat2 | None = None) -> Mat2:
        """Matrix of y in C(a), a a white involution with matrix alpha.

        ``conjugator`` may supply g with g^-1 sigma g = alpha when known.
        """
        K, Y = self.K, self.Y
        if self.view.eq(y, a):
            return alpha
        g = conjugator if conjugator is not None else self._conjugator(alpha)
        G = self.psi_bar(g)
        y2 = Y.mul(Y.mul(G, y), Y.inv(G))  # centralizes s
        Y2 = self.whiten_NS(y2, "R")
        return mul2(K, mul2(K, inv2(K, g), Y2), g)

    def random_white_involution(self):
        """(handle, matrix, conjugator g) with matrix = g^-1 sigma g."""
        K = self.K
        g = random_sl2(K, self.rng)
        A = mul2(K, mul2(K, inv2(K, g), self.sigma), g)
        return self.psi_bar(A), A, g

    def whiten_involution(self, t) -> Mat2:
        """Matrix of an involution of Y/Z(Y)."""
        cached = self._cache_get(t)
        if cached is not None:
            return cached
        view = self.view
        if view.eq(t, self.s):
            M = self.sigma
        elif view.commutes(t, self.s):
            M = self.whiten_centralizer(self.s, self.sigma, t, conjugator=identity2(self.K))
        else:
            for _ in range(self.whiten_retries):
                a, A, g = self.random_white_involution()
                try:
                    w = view.extract_involution(self.Y.mul(a, t))
                except OddOrder:
                    continue
                W = self.whiten_centralizer(a, A, w, conjugator=g)
                M = self.whiten_centralizer(w, W, t)
                break
            else:
                raise WhiteningExhausted("no white involution with an even-order product found")
        self._cache_put(t, M)
        return M

    def _cache_get(self, t):
        M = self.cache.get(t)
        if M is None and self.z is not None:
            M = self.cache.get(self.Y.mul(t, self.z))
        return M

    def _cache_put(self, t, M):
        self.cache[t] = M

    def audit(self) -> int:
        """Re-verify every cached whitening; returns the number of failures."""
        return sum(not self.view.eq(self.psi_bar(M), t) for t, M in self.cache.items())

    # -- backward ------------------------------------------------------------

    def theta_bar(self, y) -> Mat2:
        """Determinant-1 matrix X with psi_bar(X) == y modulo Z(Y).

        Conjugation by X must carry white involutions t_i to the whitened
        t_i^y, which is linear in X up to one sign per involution.
        """
        K, Y, view = self.K, self.Y, self.view
        if view.is_identity(y):
            return identity2(K)
        for _ in range(self.theta_retries):
            pairs = []
            for _ in range(2):
                t, T, _g = self.random_white_involution()
                pairs.append((T, self.whiten_involution(Y.conj(t, y))))
            for signs in itertools.product((1, -1), repeat=len(pairs)):
                rows = []
                for (T, Tp), sgn in zip(pairs, signs):
                    rows += commutation_rows(K, T, Tp, sgn)
                basis = nullspace(K, rows)
                if len(basis) != 1:
                    continue
                X = basis[0]
                d = det2(K, X)
                if K.is_zero(d) or not K.is_square(d):
                    continue
                X = normalize_sl2(K, X)
                if view.eq(self.psi_bar(X), y):
                    return X
        raise WhiteningExhausted("theta_bar: no consistent conjugating matrix found")

    def theta(self, y) -> Mat2:
        """Inverse of psi: the sign of theta_bar(y) fixed by psi(U) == y."""
        K, Y = self.K, self.Y
        U = self.theta_bar(y)
        if self.z is None:
            return U
        image = self.psi(U)
        if Y.eq(image, y):
            return U
        if Y.eq(Y.mul(image, self.z), y):
            return mat_neg(K, U)
        raise LiftError("neither sign of theta_bar(y) maps to y")


# --------------------------------------------------------------------------
# proxies


@dataclass
class ProxyPair:
    """Mutually inverse maps between matrices over K and a black box group."""

    flavor: str
    field: BlackBoxField
    group: object
    forward: Callable
    backward: Callable
    same_matrix: Callable
    random_matrix: Callable
    state: object = None
    extras: dict = field(default_factory=dict)


def build_sl2_proxy(bundle, rng: random.Random | None = None, **retries) -> ProxyPair:
    """Recognize Y ~ SL2(K): psi and theta are exact mutually inverse isomorphisms."""
    rng = rng or random.Random()
    Y = bundle.group
    z = find_central_involution(Y, rng)
    if z is None:
        raise FlavorError("no central involution: the box does not encrypt SL2")
    rec = Recognizer(bundle, z, rng, **retries)
    K = rec.K
    return ProxyPair("sl2", K, Y, rec.psi, rec.theta,
                     lambda X, Z: mat_eq(K, X, Z),
                     lambda r=None: random_sl2(K, r or rng), rec)


def build_psl2_proxy(bundle, rng: random.Random | None = None, **retries) -> ProxyPair:
    rng = rng or random.Random()
    rec = Recognizer(bundle, None, rng, **retries)
    K = rec.K
    return ProxyPair("psl2", K, bundle.group, rec.psi_bar, rec.theta_bar,
                     lambda X, Z: proj_eq(K, X, Z),
                     lambda r=None: random_sl2(K, r or rng), rec)


class PglProxy:
    """PGL2(K) <-> X through SO3_flat and SO3_sharp; no whitening needed."""

    def __init__(self, bundle, rng=None):
        self.bundle = bundle
        self.K = bundle.field
        self.cob = build_change_of_basis(self.K, rng)

    def forward(self, A: Mat2):
        return self.bundle.from_sharp(self.cob.flat_to_sharp(phi(self.K, A)))

    def backward(self, x) -> Mat2:
        return phi_inv(self.K, self.cob.sharp_to_flat(self.bundle.to_sharp(x)))


def build_pgl2_proxy(bundle, rng: random.Random | None = None, **_retries) -> ProxyPair:
    rng = rng or random.Random()
    p = PglProxy(bundle, rng)
    K = p.K
    return ProxyPair("pgl2", K, bundle.group, p.forward, p.backward,
                     lambda X, Z: proj_eq(K, X, Z),
                     lambda r=None: random_gl2(K, r or rng), p)
