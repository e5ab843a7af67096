"""2x2 and 3x3 matrices over a black box field.

Matrices are flat row-major tuples of field handles (4 or 9 entries);
every function takes the field as its first argument.  Also here: equality
in PGL2 and Gaussian elimination for the small systems the recognition
code solves.
"""

from __future__ import annotations

from typing import Sequence

from .bbfield import BlackBoxField, FieldHandle

Mat2 = tuple  # (a, b, c, d)
Mat3 = tuple  # 9 entries, row-major


class Singular(ArithmeticError):
    pass


class Inconsistent(ArithmeticError):
    pass


def identity2(K: BlackBoxField) -> Mat2:
    return (K.one, K.zero, K.zero, K.one)


def identity3(K: BlackBoxField) -> Mat3:
    o, z = K.one, K.zero
    return (o, z, z, z, o, z, z, z, o)


def mat_eq(K: BlackBoxField, X, Y) -> bool:
    return all(K.eq(x, y) for x, y in zip(X, Y))


def scalar_mul(K: BlackBoxField, lam: FieldHandle, X):
    return tuple(K.mul(lam, x) for x in X)


def mat_neg(K, X):
    return tuple(K.neg(x) for x in X)


def mat_add(K, X, Y):
    return tuple(K.add(x, y) for x, y in zip(X, Y))


def _dot(K, xs, ys):
    acc = None
    for x, y in zip(xs, ys):
        t = K.mul(x, y)
        acc = t if acc is None else K.add(acc, t)
    return acc


def mul2(K, X: Mat2, Y: Mat2) -> Mat2:
    a, b, c, d = X
    e, f, g, h = Y
    return (_dot(K, (a, b), (e, g)), _dot(K, (a, b), (f, h)),
            _dot(K, (c, d), (e, g)), _dot(K, (c, d), (f, h)))


def mul3(K, X: Mat3, Y: Mat3) -> Mat3:
    cols = [Y[j::3] for j in range(3)]
    return tuple(_dot(K, X[3 * i:3 * i + 3], cols[j]) for i in range(3) for j in range(3))


def det2(K, X: Mat2) -> FieldHandle:
    a, b, c, d = X
    return K.sub(K.mul(a, d), K.mul(b, c))


def det3(K, X: Mat3) -> FieldHandle:
    a, b, c, d, e, f, g, h, i = X
    t1 = K.mul(a, K.sub(K.mul(e, i), K.mul(f, h)))
    t2 = K.mul(b, K.sub(K.mul(d, i), K.mul(f, g)))
    t3 = K.mul(c, K.sub(K.mul(d, h), K.mul(e, g)))
    return K.add(K.sub(t1, t2), t3)


def transpose2(X: Mat2) -> Mat2:
    a, b, c, d = X
    return (a, c, b, d)


def transpose3(X: Mat3) -> Mat3:
    return tuple(X[3 * j + i] for i in range(3) for j in range(3))


def inv2(K, X: Mat2) -> Mat2:
    d = det2(K, X)
    if K.is_zero(d):
        raise Singular("2x2 matrix is singular")
    di = K.inv(d)
    a, b, c, dd = X
    return (K.mul(dd, di), K.neg(K.mul(b, di)), K.neg(K.mul(c, di)), K.mul(a, di))


def inv3(K, X: Mat3) -> Mat3:
    a, b, c, d, e, f, g, h, i = X
    sub, mul = K.sub, K.mul
    cof = (
        sub(mul(e, i), mul(f, h)), sub(mul(c, h), mul(b, i)), sub(mul(b, f), mul(c, e)),
        sub(mul(f, g), mul(d, i)), sub(mul(a, i), mul(c, g)), sub(mul(c, d), mul(a, f)),
        sub(mul(d, h), mul(e, g)), sub(mul(b, g), mul(a, h)), sub(mul(a, e), mul(b, d)),
    )
    det = K.add(K.add(mul(a, cof[0]), mul(b, cof[3])), mul(c, cof[6]))
    if K.is_zero(det):
        raise Singular("3x3 matrix is singular")
    di = K.inv(det)
    return tuple(mul(x, di) for x in cof)


def proj_eq(K, X, Y) -> bool:
    """True iff Y = lam * X for some nonzero lam (X, Y nonzero)."""
    for x, y in zip(X, Y):
        if not K.is_zero(x):
            if K.is_zero(y):
                return False
            lam = K.div(y, x)
            return all(K.eq(K.mul(lam, u), v) for u, v in zip(X, Y))
    return all(K.is_zero(v) for v in Y)


# --------------------------------------------------------------------------
# linear systems


def _rref(K, rows: list[list], ncols: int):
    """Reduce rows in place on the first ncols columns; return pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if not K.is_zero(rows[i][c])), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = K.inv(rows[r][c])
        rows[r] = [K.mul(inv, x) for x in rows[r]]
        prow = rows[r]
        for i in range(nrows):
            if i == r:
                continue
            f = rows[i][c]
            if K.is_zero(f):
                continue
            rows[i] = [x if K.is_zero(y) else K.sub(x, K.mul(f, y)) for x, y in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def solve_linear(K, rows: Sequence[Sequence], rhs: Sequence | None = None):
    """Solve rows . x = rhs (rhs defaults to zero).

    Returns (particular, basis): one solution and a basis of the homogeneous
    solution space.  Raises Inconsistent when there is no solution.
    """
    if not rows:
        raise ValueError("empty system")
    n = len(rows[0])
    if rhs is None:
        rhs = [K.zero] * len(rows)
    work = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = _rref(K, work, n)
    rank = len(pivots)
    for row in work[rank:]:
        if not K.is_zero(row[n]):
            raise Inconsistent("linear system has no solution")
    particular = [K.zero] * n
    for i, c in enumerate(pivots):
        particular[c] = work[i][n]
    basis = []
    for f in range(n):
        if f in pivots:
            continue
        v = [K.zero] * n
        v[f] = K.one
        for i, c in enumerate(pivots):
            v[c] = K.neg(work[i][f])
        basis.append(tuple(v))
    return tuple(particular), basis


def nullspace(K, rows) -> list[tuple]:
    return solve_linear(K, rows)[1]


def commutation_rows(K, left: Mat2, right: Mat2, sign: int = 1) -> list[list]:
    """Rows of the linear system left . X = sign * X . right in X's 4 entries."""
    l11, l12, l21, l22 = left
    r11, r12, r21, r22 = right
    z = K.zero
    if sign < 0:
        r11, r12, r21, r22 = (K.neg(v) for v in (r11, r12, r21, r22))
    # (left X)_{ij} - (X right)_{ij} with X = (x1, x2, x3, x4)
    return [
        [K.sub(l11, r11), K.neg(r21), l12, z],
        [K.neg(r12), K.sub(l11, r22), z, l12],
        [l21, z, K.sub(l22, r11), K.neg(r21)],
        [z, l21, K.neg(r12), K.sub(l22, r22)],
    ]
