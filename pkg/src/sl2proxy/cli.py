"""Command-line front end.

    sl2proxy gen --q 7 --flavor sl2 --seed 1 --out inst.json
    sl2proxy recognize --instance inst.json
    sl2proxy verify --q 1009 --flavor psl2 --samples 1000
    sl2proxy selftest
    sl2proxy bench

Exit codes: 0 ok, 2 verification failure, 3 configuration error,
4 black-box inconsistency.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .bbfield import FieldExhausted, NotSquare
from .bbgroup import GroupExhausted, OddOrder
from .forms import DomainError
from .matlin import Inconsistent, Singular
from .pgl2_so3 import MalformedInput
from .recognition import THETA_RETRIES, WHITEN_RETRIES, RecognitionError
from .simulation import FLAVORS, ConfigError, InvalidHandle, SimulatedGroup, load_instance, save_instance
from .verify import DEFAULT_LADDER, bench_report, dumps, recognition_report

EXIT_OK = 0
EXIT_VERIFY = 2
EXIT_CONFIG = 3
EXIT_INCONSISTENT = 4

INCONSISTENCY_ERRORS = (RecognitionError, InvalidHandle, NotSquare, FieldExhausted, GroupExhausted,
                        OddOrder, DomainError, MalformedInput, Singular, Inconsistent)


@dataclass
class RunConfig:
    command: str
    q: int | None = None
    flavor: str = "sl2"
    seed: int = 0
    samples: int = 100
    retries: int | None = None
    out: Path | None = None
    instance: Path | None = None
    ladder: list[int] = field(default_factory=lambda: list(DEFAULT_LADDER))

    def validate(self) -> None:
        if self.samples < 1:
            raise ConfigError("--samples must be at least 1")
        if self.retries is not None and self.retries < 1:
            raise ConfigError("--retries must be at least 1")

    @property
    def retry_budget(self) -> dict:
        if self.retries is None:
            return {}
        return {"whiten_retries": self.retries, "theta_retries": self.retries}


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def _group_for(config: RunConfig) -> SimulatedGroup:
    if config.instance is not None:
        return load_instance(config.instance)
    if config.q is None:
        raise ConfigError("give --instance or --q")
    return SimulatedGroup(config.q, config.flavor, seed=config.seed)


def cmd_gen(config: RunConfig) -> int:
    if config.q is None:
        raise ConfigError("gen needs --q")
    group = SimulatedGroup(config.q, config.flavor, seed=config.seed)
    out = config.out or Path(f"instance-{config.flavor}-{config.seed}.json")
    save_instance(out, group)
    print(out)
    return EXIT_OK


def _run_report(config: RunConfig, homomorphism: bool) -> int:
    group = _group_for(config)
    report = recognition_report(group, config.seed, config.samples, config.retry_budget,
                                homomorphism=homomorphism, command=config.command)
    _emit(dumps(report), config.out)
    return EXIT_OK if report["failures"] == 0 else EXIT_VERIFY


def cmd_recognize(config: RunConfig) -> int:
    return _run_report(config, homomorphism=False)


def cmd_verify(config: RunConfig) -> int:
    return _run_report(config, homomorphism=True)


def cmd_selftest(config: RunConfig) -> int:
    from .selftest import selftest_report

    report = selftest_report(config.q or 7, config.seed)
    _emit(dumps(report), config.out)
    return EXIT_OK if report["failures"] == 0 else EXIT_VERIFY


def cmd_bench(config: RunConfig) -> int:
    ladder = [config.q] if config.q is not None and not config.ladder else config.ladder
    report = bench_report(ladder, config.seed, config.flavor)
    _emit(dumps(report), config.out)
    return EXIT_OK


COMMANDS = {"gen": cmd_gen, "recognize": cmd_recognize, "verify": cmd_verify,
            "selftest": cmd_selftest, "bench": cmd_bench}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sl2proxy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, help="field order of a fresh simulated instance")
    common.add_argument("--flavor", choices=FLAVORS, default="sl2")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", type=Path, help="output file (default: stdout)")
    for name, help_text in (("gen", "write a simulated black box instance"),
                            ("recognize", "build a proxy and check round trips"),
                            ("verify", "homomorphism and round-trip sampling suite"),
                            ("selftest", "exhaustive brute-force comparisons at small q"),
                            ("bench", "operation counts of proxy construction over a q ladder")):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name in ("recognize", "verify"):
            p.add_argument("--instance", type=Path, help="instance file written by gen")
            p.add_argument("--samples", type=int, default=1000 if name == "verify" else 100)
            p.add_argument("--retries", type=int,
                           help=f"retry budget per whitening step (default {WHITEN_RETRIES}/{THETA_RETRIES})")
        if name == "bench":
            p.add_argument("--ladder", type=int, nargs="+", default=list(DEFAULT_LADDER))
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(**{k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__})
    try:
        config.validate()
        return COMMANDS[config.command](config)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except INCONSISTENCY_ERRORS as exc:
        print(f"black-box inconsistency: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
