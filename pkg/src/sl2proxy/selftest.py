"""Exhaustive comparisons against brute force on small simulated instances.

These checks read hidden encodings (to enumerate whole groups), so they
live outside the black-box modules and run inside whitebox scopes.
"""

from __future__ import annotations

import itertools
import random

from .bbgroup import CenterQuotientView
from .matlin import identity2, mat_eq, mul2, proj_eq
from .pgl2_so3 import phi, phi_inv
from .plainfield import GF
from .recognition import transvection_decompose
from .simulation import SimulatedField, SimulatedGroup, whitebox
from .verify import REPORT_SCHEMA, Stopwatch, build_proxy


def brute_force_so3_flat(F: GF) -> set[tuple]:
    """{M : M^t J M = J, det M = 1}, built column by column.

    Column i of M is a vector c_i with B(c_i, c_j) = J_ij for the bilinear
    form B(x, y) = x1 y3 + x3 y1 - 2 x2 y2.
    """
    def B(x, y):
        t = F.add(F.mul(x[0], y[2]), F.mul(x[2], y[0]))
        return F.sub(t, F.mul(F.from_int(2), F.mul(x[1], y[1])))

    vectors = list(itertools.product(F.elements(), repeat=3))
    minus_two = F.neg(F.from_int(2))
    isotropic = [v for v in vectors if any(v) and B(v, v) == 0]
    out = set()
    for c1 in isotropic:
        for c3 in isotropic:
            if B(c1, c3) != 1:
                continue
            for c2 in vectors:
                if B(c2, c2) != minus_two or B(c1, c2) != 0 or B(c3, c2) != 0:
                    continue
                M = tuple(col[i] for i in range(3) for col in (c1, c2, c3))
                if _det3(F, M) == 1:
                    out.add(M)
    return out


def _det3(F, X):
    a, b, c, d, e, f, g, h, i = X
    m, s = F.mul, F.sub
    return F.add(s(m(a, s(m(e, i), m(f, h))), m(b, s(m(d, i), m(f, g)))), m(c, s(m(d, h), m(e, g))))


def _field_matrices(F: GF, special: bool):
    """All of SL2(F), or one representative per element of PGL2(F)."""
    for M in itertools.product(F.elements(), repeat=4):
        a, b, c, d = M
        det = F.sub(F.mul(a, d), F.mul(b, c))
        if special and det != 1:
            continue
        if not special and (det == 0 or next(x for x in M if x) != 1):
            continue
        yield M


def check_phi_bijection(q: int = 7, seed: int = 0) -> dict:
    """phi maps PGL2(q) onto the brute-force SO3_flat(q); phi_inv inverts it."""
    K = SimulatedField(q, seed=seed)
    with whitebox():
        F = K.plain
        target = brute_force_so3_flat(F)
        images = {}
        inverse_failures = 0
        for M in _field_matrices(F, special=False):
            A = tuple(K.encode(x) for x in M)
            B = phi(K, A)
            images[tuple(K.decode(x) for x in B)] = M
            if not proj_eq(K, phi_inv(K, B), A):
                inverse_failures += 1
    domain = sum(1 for _ in _field_matrices(F, special=False))
    return {"domain_size": domain, "target_size": len(target), "image_size": len(images),
            "onto": set(images) == target, "injective": len(images) == domain,
            "inverse_failures": inverse_failures,
            "ok": set(images) == target and len(images) == domain and inverse_failures == 0}


def check_transvection_census(q: int = 7, seed: int = 0) -> dict:
    """Every element of SL2(q) factors into at most 4 unitriangular matrices."""
    K = SimulatedField(q, seed=seed)
    failures = 0
    histogram: dict[int, int] = {}
    with whitebox():
        mats = [tuple(K.encode(x) for x in M) for M in _field_matrices(K.plain, special=True)]
    for X in mats:
        factors = transvection_decompose(K, X)
        histogram[len(factors)] = histogram.get(len(factors), 0) + 1
        prod = identity2(K)
        for f in factors:
            prod = mul2(K, prod, f)
        if not (mat_eq(K, prod, X) and len(factors) <= 4 and all(is_unitriangular(K, f) for f in factors)):
            failures += 1
    return {"elements": len(mats), "failures": failures,
            "factor_counts": {str(k): v for k, v in sorted(histogram.items())}, "ok": failures == 0}


def is_unitriangular(K, f) -> bool:
    a, b, c, d = f
    return K.eq(a, K.one) and K.eq(d, K.one) and (K.is_zero(b) or K.is_zero(c))


def check_white_closure(q: int = 7, seed: int = 0) -> dict:
    """All involutions of PSL2(q) whiten; theta_bar inverts psi_bar on every element."""
    group = SimulatedGroup(q, "psl2", seed=seed)
    proxy = build_proxy(group, random.Random(seed))
    rec = proxy.state
    K = proxy.field
    with whitebox():
        elements = list(group.elements())
        mats = [tuple(K.encode(x) for x in M) for M in _field_matrices(K.plain, special=True)]
    involutions = [y for y in elements if group.is_involution(y)]
    whiten_failures = sum(not rec.view.eq(rec.psi_bar(rec.whiten_involution(t)), t) for t in involutions)
    section_failures = sum(not group.eq(rec.psi_bar(rec.theta_bar(y)), y) for y in elements)
    retraction_failures = sum(not proj_eq(K, rec.theta_bar(rec.psi_bar(X)), X) for X in mats)
    failures = whiten_failures + section_failures + retraction_failures + rec.audit()
    return {"elements": len(elements), "involutions": len(involutions),
            "whiten_failures": whiten_failures, "psi_bar_theta_bar_failures": section_failures,
            "theta_bar_psi_bar_failures": retraction_failures, "ok": failures == 0}


def check_exhaustive_round_trips(q: int = 7, seed: int = 0) -> dict:
    """theta o psi = id on SL2(K) and psi o theta = id on Y, exactly."""
    group = SimulatedGroup(q, "sl2", seed=seed)
    proxy = build_proxy(group, random.Random(seed))
    K = proxy.field
    with whitebox():
        elements = list(group.elements())
        mats = [tuple(K.encode(x) for x in M) for M in _field_matrices(K.plain, special=True)]
    group_failures = sum(not group.eq(proxy.forward(proxy.backward(y)), y) for y in elements)
    matrix_failures = sum(not mat_eq(K, proxy.backward(proxy.forward(X)), X) for X in mats)
    images = {proxy.forward(X) for X in mats}
    return {"elements": len(elements), "matrices": len(mats), "group_failures": group_failures,
            "matrix_failures": matrix_failures, "bijective": len(images) == len(elements) == len(mats),
            "ok": group_failures == 0 and matrix_failures == 0 and len(images) == len(elements)}


def check_center_quotient(q: int = 7, seed: int = 0) -> dict:
    """Sanity of the center: exactly two central elements of SL2(q)."""
    group = SimulatedGroup(q, "sl2", seed=seed)
    view = CenterQuotientView(group, None)
    with whitebox():
        elements = list(group.elements())
    central = [y for y in elements if all(view.commutes(y, x) for x in elements[:40])]
    return {"central_elements": len(central), "ok": len(central) == 2}


def selftest_report(q: int = 7, seed: int = 0) -> dict:
    clock = Stopwatch()
    checks = {}
    for name, fn in (("phi_bijection", check_phi_bijection),
                     ("transvection_census", check_transvection_census),
                     ("white_closure", check_white_closure),
                     ("exhaustive_round_trips", check_exhaustive_round_trips)):
        with clock(name):
            checks[name] = fn(q, seed)
    failures = sum(not c["ok"] for c in checks.values())
    return {"schema": REPORT_SCHEMA, "command": "selftest", "q": q, "seed": seed,
            "checks": checks, "failures": failures, "timings": clock.times}
