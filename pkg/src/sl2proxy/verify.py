"""Statistical checks of a proxy, operation tallies and JSON reports.

Everything here goes through black-box operations; the only privileged
step is building the emulated adjoint bundle for a simulated group.
"""

from __future__ import annotations

import json
import math
import random
import time
from collections import Counter
from contextlib import contextmanager

from .matlin import mul2
from .oracle import build_adjoint_bundle, build_pgl_adjoint
from .recognition import ProxyPair, build_pgl2_proxy, build_psl2_proxy, build_sl2_proxy
from .simulation import SimulatedGroup

REPORT_SCHEMA = "sl2proxy.report/1"
DEFAULT_LADDER = (7, 101, 1009, 65521, 2147483647)


class Stopwatch:
    """Named wall-clock intervals, kept apart from deterministic report fields."""

    def __init__(self):
        self.times: dict[str, float] = {}

    @contextmanager
    def __call__(self, name: str):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.times[name] = round(self.times.get(name, 0.0) + time.perf_counter() - t0, 6)


def build_proxy(group: SimulatedGroup, rng: random.Random, **retries) -> ProxyPair:
    """Dispatch on the flavor the simulated box was created with."""
    if group.flavor == "pgl2":
        return build_pgl2_proxy(build_pgl_adjoint(group), rng)
    bundle = build_adjoint_bundle(group)
    if group.flavor == "sl2":
        return build_sl2_proxy(bundle, rng, **retries)
    return build_psl2_proxy(bundle, rng, **retries)


def op_tally(proxy: ProxyPair) -> dict:
    out = {"field": dict(sorted(proxy.field.counts.items())),
           "group": dict(sorted(proxy.group.counts.items()))}
    bundle = getattr(proxy.state, "bundle", None)
    if bundle is not None:
        out["oracle"] = dict(sorted(bundle.counts.items()))
    return out


def total_ops(proxy: ProxyPair) -> int:
    """Field plus group primitive operations (equality tests included)."""
    return sum(proxy.field.counts.values()) + sum(proxy.group.counts.values())


def reset_counts(proxy: ProxyPair) -> None:
    proxy.field.counts.clear()
    proxy.group.counts.clear()


def check_homomorphism(proxy: ProxyPair, samples: int, rng: random.Random) -> dict:
    K, Y, f = proxy.field, proxy.group, proxy.forward
    failures = 0
    for _ in range(samples):
        A, B = proxy.random_matrix(rng), proxy.random_matrix(rng)
        if not Y.eq(Y.mul(f(A), f(B)), f(mul2(K, A, B))):
            failures += 1
    return {"samples": samples, "failures": failures}


def check_matrix_round_trip(proxy: ProxyPair, samples: int, rng: random.Random) -> dict:
    failures = 0
    for _ in range(samples):
        A = proxy.random_matrix(rng)
        if not proxy.same_matrix(proxy.backward(proxy.forward(A)), A):
            failures += 1
    return {"samples": samples, "failures": failures}


def check_group_round_trip(proxy: ProxyPair, samples: int, rng: random.Random) -> dict:
    Y = proxy.group
    failures = 0
    for _ in range(samples):
        y = Y.random(rng)
        if not Y.eq(proxy.forward(proxy.backward(y)), y):
            failures += 1
    return {"samples": samples, "failures": failures}


def describe_group(group: SimulatedGroup) -> dict:
    return {"flavor": group.flavor, "group_exponent": group.exponent,
            "handle_width": group.handle_width}


def recognition_report(group: SimulatedGroup, seed: int, samples: int, retries: dict | None = None,
                       homomorphism: bool = False, command: str = "recognize") -> dict:
    """Build the proxy for ``group`` and run round trips (and optionally
    homomorphism checks) on ``samples`` random inputs."""
    retries = retries or {}
    rng = random.Random(seed)
    clock = Stopwatch()
    with clock("build"):
        proxy = build_proxy(group, rng, **retries)
    build_ops = op_tally(proxy)
    build_total = total_ops(proxy)
    reset_counts(proxy)
    checks = {}
    if homomorphism:
        with clock("homomorphism"):
            checks["homomorphism"] = check_homomorphism(proxy, samples, rng)
    with clock("round_trip"):
        checks["matrix_round_trip"] = check_matrix_round_trip(proxy, samples, rng)
        checks["group_round_trip"] = check_group_round_trip(proxy, samples, rng)
    failures = sum(c["failures"] for c in checks.values())
    rec = getattr(proxy, "state", None)
    report = {
        "schema": REPORT_SCHEMA,
        "command": command,
        "seed": seed,
        "instance": describe_group(group),
        "checks": checks,
        "round_trip_failures": checks["matrix_round_trip"]["failures"] + checks["group_round_trip"]["failures"],
        "failures": failures,
        "build_op_counts": build_ops,
        "build_total_ops": build_total,
        "check_op_counts": op_tally(proxy),
        "timings": clock.times,
    }
    if hasattr(rec, "cache"):
        report["white_involutions"] = len(rec.cache)
        report["white_cache_audit_failures"] = rec.audit()
        report["failures"] += report["white_cache_audit_failures"]
    return report


def fit_degree(points: list[tuple[int, int]]) -> float:
    """Least-squares slope of log(ops) against log(log q)."""
    xs = [math.log(math.log(q)) for q, _ in points]
    ys = [math.log(n) for _, n in points]
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    den = sum((x - mx) ** 2 for x in xs)
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / den


def bench_report(ladder=DEFAULT_LADDER, seed: int = 0, flavor: str = "sl2") -> dict:
    """Operation counts of proxy construction along a ladder of field orders."""
    rows = []
    clock = Stopwatch()
    for q in ladder:
        group = SimulatedGroup(q, flavor, seed=seed)
        with clock(f"q={q}"):
            proxy = build_proxy(group, random.Random(seed))
        rows.append({"q": q, "log2_q": round(math.log2(q), 3), "total_ops": total_ops(proxy),
                     "op_counts": op_tally(proxy)})
    degree = fit_degree([(r["q"], r["total_ops"]) for r in rows]) if len(rows) > 1 else None
    return {"schema": REPORT_SCHEMA, "command": "bench", "seed": seed, "flavor": flavor,
            "ladder": rows, "fitted_degree": None if degree is None else round(degree, 4),
            "timings": clock.times}


def dumps(report: dict) -> str:
    """Canonical JSON text: sorted keys, UTF-8 safe, trailing newline."""
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def without_timings(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timings"}


def merge_counts(*counters) -> Counter:
    total = Counter()
    for c in counters:
        total.update(c)
    return total
