"""The black-box modules cannot reach hidden encodings."""

import ast
import inspect
import random

import pytest

from sl2proxy import bbfield, bbgroup, forms, matlin, pgl2_so3, recognition, simulation
from sl2proxy.simulation import BLACKBOX_MODULES, SimulatedField, SimulatedGroup, WhiteboxAccessError, whitebox
from sl2proxy.verify import build_proxy

BLACKBOX = [bbfield, bbgroup, forms, matlin, pgl2_so3, recognition]
FORBIDDEN_IMPORTS = {"simulation", "oracle", "selftest", "verify", "plainfield", "cli"}
FORBIDDEN_NAMES = {"decode", "encode", "plain", "whitebox", "q_hidden", "_gf", "_dec", "_enc", "_hidden"}


def _tree(module):
    return ast.parse(inspect.getsource(module))


@pytest.mark.parametrize("module", BLACKBOX, ids=lambda m: m.__name__)
def test_blackbox_modules_import_only_blackbox_code(module):
    assert module.__name__ in BLACKBOX_MODULES
    for node in ast.walk(_tree(module)):
        if isinstance(node, ast.ImportFrom) and node.level:
            assert (node.module or "").split(".")[0] not in FORBIDDEN_IMPORTS, node.module
        if isinstance(node, ast.Import):
            assert not any(a.name.startswith("sl2proxy") for a in node.names)


@pytest.mark.parametrize("module", BLACKBOX, ids=lambda m: m.__name__)
def test_blackbox_modules_never_touch_hidden_attributes(module):
    for node in ast.walk(_tree(module)):
        if isinstance(node, ast.Attribute):
            assert node.attr not in FORBIDDEN_NAMES, f"{module.__name__} uses .{node.attr}"
        if isinstance(node, ast.Name):
            assert node.id not in FORBIDDEN_NAMES


def test_whitebox_cannot_be_opened_from_a_blackbox_module():
    ns = {"__name__": "sl2proxy.recognition", "whitebox": whitebox}
    exec("def sneak():\n    with whitebox():\n        pass\n", ns)
    with pytest.raises(WhiteboxAccessError):
        ns["sneak"]()


def test_decode_from_blackbox_frame_is_refused_even_inside_scope():
    K = SimulatedField(7)
    ns = {"__name__": "sl2proxy.recognition", "K": K}
    exec("def peek(h):\n    return K.decode(h)\n", ns)
    with whitebox():
        with pytest.raises(WhiteboxAccessError):
            ns["peek"](K.one)


def test_recognition_opens_no_whitebox_scope(monkeypatch):
    """Every hidden access during recognition is made by the oracle."""
    seen = set()
    monkeypatch.setattr(simulation, "SCOPE_AUDIT", seen)
    P = build_proxy(SimulatedGroup(11, "sl2", seed=1), random.Random(0))
    P.backward(P.group.random(random.Random(1)))
    assert seen and set(seen) <= {"sl2proxy.oracle"}
