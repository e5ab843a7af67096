"""Whitebox stand-in for the adjoint representation of a simulated group.

Recognition starts from: a black box field K for the hidden GF(q), a
homomorphism Omega3_sharp(K) -> Y/Z(Y), and two white tori S, R of Y whose
elements can be mapped back into SO3_sharp(K).  Here those are fabricated
from the simulator's hidden isomorphism.  Nothing in this module is a
black-box algorithm; it is the test double for one.

The hidden identification is h(Y) = (P0^t)^-1 . phi(g0 Y g0^-1) . P0^t with
a private twist g0 and a private spinor basis P0.  Its inverse is computed
by solving the linear conjugation equations, independently of the square
root recipe used by ``pgl2_so3``.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass

from sympy import factorint
from sympy.ntheory import primitive_root

from .plainfield import GF
from .simulation import (ConfigError, SimulatedField, SimulatedGroup, derive_key,
                         mat_det, mat_inv, mat_mul, mat_scale, whitebox)


class OracleDomainError(ValueError):
    """Input outside the domain the emulated map is defined on."""


class NotInSeed(ValueError):
    """Backward map requested for an element outside the white torus."""


def field_for(group: SimulatedGroup) -> SimulatedField:
    """The black box field K attached to a simulated group instance."""
    with whitebox():
        q = group.plain.q
    return SimulatedField(q, seed=group.seed, exponent_mode=group.exponent_mode, label="field")


# --------------------------------------------------------------------------
# plain linear algebra over GF(q)


def plain_phi(F: GF, A):
    """Adjoint matrix of A^t on E, W, F (plain ints, column coordinates)."""
    a, b, c, d = A
    mul, add = F.mul, F.add
    delta = F.inv(mat_det(F, A))
    two = F.from_int(2)
    raw = (mul(a, a), mul(two, mul(a, b)), mul(b, b),
           mul(a, c), add(mul(a, d), mul(b, c)), mul(b, d),
           mul(c, c), mul(two, mul(c, d)), mul(d, d))
    return tuple(mul(delta, x) for x in raw)


def plain_mul3(F: GF, X, Y):
    out = []
    for i in range(3):
        for j in range(3):
            acc = 0
            for k in range(3):
                acc = F.add(acc, F.mul(X[3 * i + k], Y[3 * k + j]))
            out.append(acc)
    return tuple(out)


def plain_transpose3(X):
    return tuple(X[3 * j + i] for i in range(3) for j in range(3))


def plain_det3(F: GF, X):
    a, b, c, d, e, f, g, h, i = X
    m, s = F.mul, F.sub
    return F.add(s(m(a, s(m(e, i), m(f, h))), m(b, s(m(d, i), m(f, g)))), m(c, s(m(d, h), m(e, g))))


def plain_nullspace(F: GF, rows, n):
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv(rows[r][c])
        rows[r] = [F.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in range(n):
        if free in pivots:
            continue
        v = [0] * n
        v[free] = 1
        for i, c in enumerate(pivots):
            v[c] = F.neg(rows[i][free])
        basis.append(tuple(v))
    return basis


_CANONICAL = ((0, 0, -1, 0), (1, 0, 0, -1), (0, 1, 0, 0))  # E, W, F


def plain_phi_inv(F: GF, M):
    """Projective preimage of M under plain_phi, by linear algebra.

    plain_phi(A) is the matrix of X -> C^-1 X C with C = A^t, so
    e_j C = C m_j for m_j = sum_i M_ij e_i, which is linear in C.
    """
    basis = [tuple(F.from_int(x) if x >= 0 else F.neg(F.from_int(-x)) for x in e) for e in _CANONICAL]
    rows = []
    for j in range(3):
        m = [0, 0, 0, 0]
        for i in range(3):
            coeff = M[3 * i + j]
            m = [F.add(u, F.mul(coeff, v)) for u, v in zip(m, basis[i])]
        e = basis[j]
        # e C - C m = 0 in the entries (c1, c2, c3, c4) of C
        l11, l12, l21, l22 = e
        r11, r12, r21, r22 = m
        rows += [
            [F.sub(l11, r11), F.neg(r21), l12, 0],
            [F.neg(r12), F.sub(l11, r22), 0, l12],
            [l21, 0, F.sub(l22, r11), F.neg(r21)],
            [0, l21, F.neg(r12), F.sub(l22, r22)],
        ]
    null = plain_nullspace(F, rows, 4)
    if len(null) != 1:
        raise OracleDomainError("matrix is not an adjoint image")
    c1, c2, c3, c4 = null[0]
    A = (c1, c3, c2, c4)
    if mat_det(F, A) == 0 or plain_phi(F, A) != tuple(M):
        raise OracleDomainError("matrix is not an adjoint image")
    return A


def plain_two_squares(F: GF, rng: random.Random):
    while True:
        a = F.random(rng)
        b = F.sqrt(F.sub(F.neg(1), F.mul(a, a)))
        if b is not None:
            return a, b


def plain_random_sl2(F: GF, rng: random.Random):
    while True:
        M = tuple(F.random(rng) for _ in range(4))
        d = mat_det(F, M)
        if d:
            a, b, c, dd = M
            di = F.inv(d)
            return (F.mul(a, di), F.mul(b, di), c, dd)


def plain_pow2(F: GF, M, n):
    R = (1, 0, 0, 1)
    while n:
        if n & 1:
            R = mat_mul(F, R, M)
        M = mat_mul(F, M, M)
        n >>= 1
    return R


def _primitive_element(F: GF):
    if F.k > 1:
        return F.generator
    return int(primitive_root(F.q))


def _has_exact_order(F: GF, M, n):
    if plain_pow2(F, M, n) != (1, 0, 0, 1):
        return False
    return all(plain_pow2(F, M, n // r) != (1, 0, 0, 1) for r in factorint(n))


def split_torus_generator(F: GF):
    w = _primitive_element(F)
    return (w, 0, 0, F.inv(w))


def nonsplit_torus_generator(F: GF, rng: random.Random):
    n = F.q + 1
    while True:
        M = plain_random_sl2(F, rng)
        tr = F.add(M[0], M[3])
        if F.is_square(F.sub(F.mul(tr, tr), F.from_int(4))):
            continue
        if _has_exact_order(F, M, n):
            return M


# --------------------------------------------------------------------------
# the hidden identification


class _Hidden:
    def __init__(self, F: GF, seed: int):
        rng = random.Random(derive_key(seed, "oracle"))
        self.F = F
        self.twist = plain_random_sl2(F, rng)
        self.twist_inv = mat_inv(F, self.twist)
        a0, b0 = plain_two_squares(F, rng)
        P0 = (1, 0, 1, F.neg(b0), a0, b0, a0, b0, F.neg(a0))
        self.Pt = plain_transpose3(P0)
        half = F.inv(F.from_int(2))
        J = (0, 0, 1, 0, F.neg(F.from_int(2)), 0, 1, 0, 0)
        self.Pt_inv = tuple(F.mul(half, x) for x in plain_mul3(F, P0, J))
        self.rng = rng

    def to_sharp(self, Y):
        F = self.F
        M = plain_phi(F, mat_mul(F, mat_mul(F, self.twist, Y), self.twist_inv))
        return plain_mul3(F, plain_mul3(F, self.Pt_inv, M), self.Pt)

    def from_sharp(self, N, special: bool):
        F = self.F
        if plain_mul3(F, plain_transpose3(N), N) != (1, 0, 0, 0, 1, 0, 0, 0, 1) or plain_det3(F, N) != 1:
            raise OracleDomainError("matrix is not in SO3_sharp")
        M = plain_mul3(F, plain_mul3(F, self.Pt, N), self.Pt_inv)
        A = plain_phi_inv(F, M)
        A = mat_mul(F, mat_mul(F, self.twist_inv, A), self.twist)
        if special:
            r = F.sqrt(mat_det(F, A))
            if r is None:
                raise OracleDomainError("matrix is in SO3 but not in Omega3")
            A = mat_scale(F, F.inv(r), A)
        return A


@dataclass
class TorusSeed:
    name: str
    generator: bytes  # handle in Y
    order: int  # order of the torus in SL2(q) (whitebox bookkeeping)
    _plain_gen: tuple


class AdjointBundle:
    """Emulated output of the adjoint construction for Y ~ SL2(q) or PSL2(q).

    Public surface used by recognition: ``field``, ``group``,
    ``forward(N)``, ``seed_generator(name)``, ``seed_backward(name, y)``.
    """

    def __init__(self, group: SimulatedGroup):
        if group.flavor not in ("sl2", "psl2"):
            raise ConfigError(f"adjoint bundle needs an sl2 or psl2 box, got {group.flavor}")
        self.group = group
        self.field = field_for(group)
        self.counts = Counter()
        with whitebox():
            F = group.plain
            self._hidden = _Hidden(F, group.seed)
            q = F.q
            eps = 1 if q % 4 == 1 else -1
            split = split_torus_generator(F)
            nonsplit = nonsplit_torus_generator(F, self._hidden.rng)
            # R: SL2-order q - eps (divisible by 4); S: order q + eps (twice odd)
            if eps == 1:
                r_gen, s_gen, r_ord, s_ord = split, nonsplit, q - 1, q + 1
            else:
                r_gen, s_gen, r_ord, s_ord = nonsplit, split, q + 1, q - 1
            self._seeds = {
                "S": TorusSeed("S", group.encode(s_gen), s_ord, s_gen),
                "R": TorusSeed("R", group.encode(r_gen), r_ord, r_gen),
            }

    @property
    def seed_names(self):
        return tuple(self._seeds)

    def seed_generator(self, name: str) -> bytes:
        return self._seeds[name].generator

    def forward(self, N) -> bytes:
        """Omega3_sharp(K) -> Y, well defined modulo Z(Y)."""
        self.counts["forward"] += 1
        K = self.field
        with whitebox():
            plain = tuple(K.decode(x) for x in N)
            A = self._hidden.from_sharp(plain, special=True)
            return self.group.encode(A)

    def backward(self, y):
        """Y -> SO3_sharp(K) on all of Y (whitebox; tests only)."""
        K = self.field
        with whitebox():
            Y = self.group.decode(y)
            return tuple(K.encode(x) for x in self._hidden.to_sharp(Y))

    def seed_backward(self, name: str, y) -> tuple:
        """The natural map from a white torus into SO3_sharp(K)."""
        self.counts["seed_backward"] += 1
        seed = self._seeds[name]
        with whitebox():
            F = self.group.plain
            Y = self.group.decode(y)
            G = seed._plain_gen
            if not _commute_mod_sign(F, Y, G):
                raise NotInSeed(f"element is not in torus {name}")
        return self.backward(y)


def _commute_mod_sign(F, X, Y):
    XY, YX = mat_mul(F, X, Y), mat_mul(F, Y, X)
    return XY == YX or XY == tuple(F.neg(v) for v in YX)


class PglAdjointBundle:
    """Emulated two-way maps X <-> SO3_sharp(K) for X ~ PGL2(q)."""

    def __init__(self, group: SimulatedGroup):
        if group.flavor != "pgl2":
            raise ConfigError(f"pgl adjoint bundle needs a pgl2 box, got {group.flavor}")
        self.group = group
        self.field = field_for(group)
        self.counts = Counter()
        with whitebox():
            self._hidden = _Hidden(group.plain, group.seed)

    def to_sharp(self, x):
        self.counts["to_sharp"] += 1
        K = self.field
        with whitebox():
            return tuple(K.encode(v) for v in self._hidden.to_sharp(self.group.decode(x)))

    def from_sharp(self, N):
        self.counts["from_sharp"] += 1
        K = self.field
        with whitebox():
            plain = tuple(K.decode(v) for v in N)
            return self.group.encode(self._hidden.from_sharp(plain, special=False))


def build_adjoint_bundle(group: SimulatedGroup) -> AdjointBundle:
    return AdjointBundle(group)


def build_pgl_adjoint(group: SimulatedGroup) -> PglAdjointBundle:
    return PglAdjointBundle(group)
