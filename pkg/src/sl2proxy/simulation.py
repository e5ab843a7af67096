"""Simulated black boxes over a hidden GF(q).

Elements are encoded by a keyed Feistel permutation of fixed-width byte
strings, so handles are canonical and equality is byte equality.  The
hidden decoding is reachable only inside a ``whitebox()`` scope, and that
scope refuses to open when entered from the black-box algorithm modules.
"""

from __future__ import annotations

import contextvars
import hashlib
import json
import random
import sys
from pathlib import Path

from .bbfield import BlackBoxField
from .bbgroup import BlackBoxGroup
from .plainfield import GF, prime_power

FLAVORS = ("sl2", "psl2", "pgl2")
MIN_FIELD_ORDER = 7
INSTANCE_SCHEMA = "sl2proxy.instance/1"

# Modules that implement black-box algorithms; they may never decode.
BLACKBOX_MODULES = frozenset({
    "sl2proxy.bbfield",
    "sl2proxy.bbgroup",
    "sl2proxy.matlin",
    "sl2proxy.forms",
    "sl2proxy.pgl2_so3",
    "sl2proxy.recognition",
})

_SCOPE = contextvars.ContextVar("sl2proxy_whitebox", default=False)

#: when set to a set, records the module of every caller that opens a scope
SCOPE_AUDIT: set[str] | None = None


class WhiteboxAccessError(PermissionError):
    """Hidden decoding requested outside an allowed whitebox scope."""


class InvalidHandle(ValueError):
    """A byte string that the black box never emitted."""


class ConfigError(ValueError):
    """Unsupported simulation parameters."""


class whitebox:
    """Context manager granting access to hidden encodings."""

    def __enter__(self):
        caller = sys._getframe(1).f_globals.get("__name__", "")
        if SCOPE_AUDIT is not None:
            SCOPE_AUDIT.add(caller)
        if caller in BLACKBOX_MODULES:
            raise WhiteboxAccessError(f"{caller} may not open a whitebox scope")
        self._token = _SCOPE.set(True)
        return self

    def __exit__(self, *exc):
        _SCOPE.reset(self._token)
        return False


def _require_whitebox():
    if not _SCOPE.get():
        raise WhiteboxAccessError("hidden decoding outside a whitebox scope")
    caller = sys._getframe(2).f_globals.get("__name__", "")
    if caller in BLACKBOX_MODULES:
        raise WhiteboxAccessError(f"{caller} may not decode handles")


def check_field_order(q: int) -> None:
    try:
        p, _ = prime_power(q)
    except ValueError:
        raise ConfigError(f"q={q} is not a prime power") from None
    if p == 2:
        raise ConfigError(f"q={q}: characteristic 2 is not supported")
    if q < MIN_FIELD_ORDER:
        raise ConfigError(f"q={q}: fields with fewer than {MIN_FIELD_ORDER} elements are not supported")


def derive_key(seed: int, label: str) -> bytes:
    return hashlib.blake2b(f"sl2proxy/{label}/{seed}".encode(), digest_size=32).digest()


def _handle_width(space: int) -> int:
    # even byte count, at least 16 bits of slack, at least 8 bytes
    bits = space.bit_length() + 16
    width = max(8, (bits + 7) // 8)
    return width + (width % 2)


class FeistelEncoder:
    """Keyed permutation of ``width``-byte strings (4-round Feistel)."""

    ROUNDS = 4
    CACHE_LIMIT = 1 << 20

    def __init__(self, key: bytes, width: int):
        self.width = width
        self.half = width // 2
        self.half_bits = 8 * self.half
        self.mask = (1 << self.half_bits) - 1
        round_keys = [hashlib.blake2b(key, person=b"round%d" % i, digest_size=32).digest()
                      for i in range(self.ROUNDS)]
        # keyed states are copied per call; cheaper than re-keying
        self._states = [hashlib.blake2b(key=k, digest_size=self.half) for k in round_keys]
        self._enc: dict[int, bytes] = {}
        self._dec: dict[bytes, int] = {}

    def _round(self, i: int, r: int) -> int:
        h = self._states[i].copy()
        h.update(r.to_bytes(self.half, "big"))
        return int.from_bytes(h.digest(), "big")

    def encode(self, x: int) -> bytes:
        h = self._enc.get(x)
        if h is not None:
            return h
        left, right = x >> self.half_bits, x & self.mask
        for i in range(self.ROUNDS):
            left, right = right, left ^ self._round(i, right)
        h = ((left << self.half_bits) | right).to_bytes(self.width, "big")
        self._remember(x, h)
        return h

    def decode(self, h: bytes) -> int:
        x = self._dec.get(h)
        if x is not None:
            return x
        if len(h) != self.width:
            raise InvalidHandle(f"handle of length {len(h)}, expected {self.width}")
        v = int.from_bytes(h, "big")
        left, right = v >> self.half_bits, v & self.mask
        for i in reversed(range(self.ROUNDS)):
            left, right = right ^ self._round(i, left), left
        x = (left << self.half_bits) | right
        self._remember(x, h)
        return x

    def _remember(self, x, h):
        if len(self._enc) >= self.CACHE_LIMIT:
            self._enc.clear()
            self._dec.clear()
        self._enc[x] = h
        self._dec[h] = x


# --------------------------------------------------------------------------
# fields


class SimulatedField(BlackBoxField):
    """A black box field encrypting GF(q)."""

    def __init__(self, q: int, seed: int = 0, exponent_mode: str = "exact", label: str = "field"):
        p, _ = prime_power(q)
        if p == 2:
            raise ConfigError("characteristic 2 is not supported")
        self._gf = GF(q)
        self.seed = seed
        self.label = label
        self.exponent_mode = exponent_mode
        rng = random.Random(derive_key(seed, label + "/rng"))
        exponent = _publish_exponent(q - 1, exponent_mode, rng)
        super().__init__(exponent, rng)
        self.handle_width = _handle_width(q)
        self._codec = FeistelEncoder(derive_key(seed, label), self.handle_width)
        self._zero = self._enc(0)
        self._one = self._enc(1)

    def __repr__(self):
        return f"<SimulatedField width={self.handle_width} E={self.exponent}>"

    def _enc(self, x: int) -> bytes:
        return self._codec.encode(x)

    def _dec(self, h: bytes) -> int:
        x = self._codec.decode(h)
        if x >= self._gf.q:
            raise InvalidHandle(h.hex())
        return x

    # primitives
    def add(self, a, b):
        self.counts["add"] += 1
        return self._enc(self._gf.add(self._dec(a), self._dec(b)))

    def neg(self, a):
        self.counts["neg"] += 1
        return self._enc(self._gf.neg(self._dec(a)))

    def mul(self, a, b):
        self.counts["mul"] += 1
        return self._enc(self._gf.mul(self._dec(a), self._dec(b)))

    def inv(self, a):
        self.counts["inv"] += 1
        x = self._dec(a)
        if x == 0:
            raise ZeroDivisionError("inverse of zero in black box field")
        return self._enc(self._gf.inv(x))

    @property
    def zero(self):
        return self._zero

    @property
    def one(self):
        return self._one

    def random(self, rng=None):
        self.counts["random"] += 1
        return self._enc((rng or self.rng).randrange(self._gf.q))

    # whitebox access
    @property
    def plain(self) -> GF:
        _require_whitebox()
        return self._gf

    def decode(self, h: bytes) -> int:
        _require_whitebox()
        return self._dec(h)

    def encode(self, x: int) -> bytes:
        _require_whitebox()
        return self._enc(x % self._gf.q if self._gf.k == 1 else x)


def _publish_exponent(base: int, mode: str, rng: random.Random) -> int:
    if mode == "exact":
        return base
    if mode == "padded":
        return base * rng.choice([3, 5, 7, 9, 11, 15]) * (1 << rng.randint(1, 3))
    raise ConfigError(f"unknown exponent mode {mode!r}")


# --------------------------------------------------------------------------
# groups


def mat_mul(F: GF, X, Y):
    a, b, c, d = X
    e, f, g, h = Y
    add, mul = F.add, F.mul
    return (add(mul(a, e), mul(b, g)), add(mul(a, f), mul(b, h)),
            add(mul(c, e), mul(d, g)), add(mul(c, f), mul(d, h)))


def mat_det(F: GF, X):
    a, b, c, d = X
    return F.sub(F.mul(a, d), F.mul(b, c))


def mat_inv(F: GF, X):
    a, b, c, d = X
    di = F.inv(mat_det(F, X))
    return (F.mul(d, di), F.mul(F.neg(b), di), F.mul(F.neg(c), di), F.mul(a, di))


def mat_scale(F: GF, lam, X):
    return tuple(F.mul(lam, x) for x in X)


def group_order(q: int, flavor: str) -> int:
    sl2 = q * (q * q - 1)
    if flavor == "sl2" or flavor == "pgl2":
        return sl2
    return sl2 // 2


class SimulatedGroup(BlackBoxGroup):
    """A black box group encrypting SL2(q), PSL2(q) or PGL2(q)."""

    def __init__(self, q: int, flavor: str = "sl2", seed: int = 0, exponent_mode: str = "exact"):
        check_field_order(q)
        if flavor not in FLAVORS:
            raise ConfigError(f"unknown flavor {flavor!r}")
        self._gf = F = GF(q)
        self.q_hidden = q
        self.flavor = flavor
        self.seed = seed
        self.exponent_mode = exponent_mode
        rng = random.Random(derive_key(seed, "group/rng"))
        # every element order divides p, q-1 or q+1 (times 2 in SL2)
        exponent = _publish_exponent(F.p * (q * q - 1), exponent_mode, rng)
        super().__init__(exponent, rng)
        self.handle_width = _handle_width(q**4)
        self._codec = FeistelEncoder(derive_key(seed, "group/" + flavor), self.handle_width)
        self._identity = self._enc((1, 0, 0, 1))

    def __repr__(self):
        return f"<SimulatedGroup width={self.handle_width} E={self.exponent}>"

    def _canon(self, M):
        F = self._gf
        if self.flavor == "sl2":
            return M
        if self.flavor == "psl2":
            neg = tuple(F.neg(x) for x in M)
            return min(M, neg)
        for x in M:
            if x:
                return mat_scale(F, F.inv(x), M)
        raise ValueError("zero matrix")

    def _enc(self, M) -> bytes:
        q = self._gf.q
        a, b, c, d = M
        return self._codec.encode(a + q * (b + q * (c + q * d)))

    def _dec(self, h: bytes):
        q = self._gf.q
        x = self._codec.decode(h)
        if x >= q**4:
            raise InvalidHandle(h.hex())
        a, x = x % q, x // q
        b, x = x % q, x // q
        c, d = x % q, x // q
        return (a, b, c, d)

    def mul(self, x, y):
        self.counts["mul"] += 1
        F = self._gf
        return self._enc(self._canon(mat_mul(F, self._dec(x), self._dec(y))))

    def inv(self, x):
        self.counts["inv"] += 1
        F = self._gf
        return self._enc(self._canon(mat_inv(F, self._dec(x))))

    @property
    def identity(self):
        return self._identity

    def random(self, rng=None):
        self.counts["random"] += 1
        return self._enc(self._canon(self._random_plain(rng or self.rng)))

    def _random_plain(self, rng):
        F = self._gf
        while True:
            M = tuple(F.random(rng) for _ in range(4))
            d = mat_det(F, M)
            if d:
                break
        if self.flavor == "pgl2":
            return M
        # scaling the first row by 1/det maps GL2 onto SL2 uniformly
        di = F.inv(d)
        a, b, c, dd = M
        return (F.mul(a, di), F.mul(b, di), c, dd)

    # whitebox access
    @property
    def plain(self) -> GF:
        _require_whitebox()
        return self._gf

    def decode(self, h: bytes):
        _require_whitebox()
        return self._dec(h)

    def encode(self, M) -> bytes:
        _require_whitebox()
        F = self._gf
        d = mat_det(F, M)
        if self.flavor == "pgl2":
            if d == 0:
                raise ValueError("singular matrix")
        elif d != 1:
            raise ValueError("matrix does not have determinant 1")
        return self._enc(self._canon(tuple(M)))

    def elements(self):
        """All group elements as handles (whitebox; small q only)."""
        _require_whitebox()
        F = self._gf
        seen = set()
        for a in F.elements():
            for b in F.elements():
                for c in F.elements():
                    for d in F.elements():
                        M = (a, b, c, d)
                        det = mat_det(F, M)
                        if det == 0 or (self.flavor != "pgl2" and det != 1):
                            continue
                        h = self._enc(self._canon(M))
                        if h not in seen:
                            seen.add(h)
                            yield h


# --------------------------------------------------------------------------
# instance files


def _seal(q: int, seed: int) -> str:
    pad = int.from_bytes(derive_key(seed, "seal"), "big")
    return format(q ^ pad, "x")


def _unseal(sealed: str, seed: int) -> int:
    pad = int.from_bytes(derive_key(seed, "seal"), "big")
    return int(sealed, 16) ^ pad


def instance_record(group: SimulatedGroup) -> dict:
    from .oracle import field_for  # the oracle fixes how K derives from the instance

    with whitebox():
        K = field_for(group)
        return {
            "schema": INSTANCE_SCHEMA,
            "seed": group.seed,
            "exponent_mode": group.exponent_mode,
            "field": {"handle_width": K.handle_width, "exponent": K.exponent},
            "group": {"handle_width": group.handle_width, "exponent": group.exponent},
            "whitebox": {"flavor": group.flavor, "q_sealed": _seal(group.q_hidden, group.seed)},
        }


def save_instance(path, group: SimulatedGroup) -> None:
    text = json.dumps(instance_record(group), indent=2, sort_keys=True) + "\n"
    Path(path).write_text(text, encoding="utf-8")


def load_instance(path) -> SimulatedGroup:
    rec = json.loads(Path(path).read_text(encoding="utf-8"))
    if rec.get("schema") != INSTANCE_SCHEMA:
        raise ConfigError(f"unsupported instance schema {rec.get('schema')!r}")
    seed = rec["seed"]
    q = _unseal(rec["whitebox"]["q_sealed"], seed)
    group = SimulatedGroup(q, rec["whitebox"]["flavor"], seed, rec.get("exponent_mode", "exact"))
    if group.exponent != rec["group"]["exponent"] or group.handle_width != rec["group"]["handle_width"]:
        raise ConfigError("instance file does not match its regenerated black box")
    return group
