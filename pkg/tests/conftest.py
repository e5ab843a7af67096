import random
import sys

import pytest

from sl2proxy.oracle import build_adjoint_bundle, build_pgl_adjoint
from sl2proxy.recognition import build_pgl2_proxy, build_psl2_proxy, build_sl2_proxy
from sl2proxy.simulation import SimulatedField, SimulatedGroup, whitebox

_PROXIES = {}


def proxy_for(q, flavor, seed=0):
    """Session-wide cache of recognized simulated instances."""
    key = (q, flavor, seed)
    if key not in _PROXIES:
        group = SimulatedGroup(q, flavor, seed=seed)
        rng = random.Random(seed)
        if flavor == "pgl2":
            _PROXIES[key] = build_pgl2_proxy(build_pgl_adjoint(group), rng)
        elif flavor == "sl2":
            _PROXIES[key] = build_sl2_proxy(build_adjoint_bundle(group), rng)
        else:
            _PROXIES[key] = build_psl2_proxy(build_adjoint_bundle(group), rng)
    return _PROXIES[key]


def enc(K, *xs):
    with whitebox():
        return tuple(K.encode(x) for x in xs)


def dec(K, xs):
    with whitebox():
        return tuple(K.decode(x) for x in xs)


@pytest.fixture
def F7():
    return SimulatedField(7, seed=1)


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULT_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
