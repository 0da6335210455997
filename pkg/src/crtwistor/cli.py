"""Command-line driver: ``crtwistor <command> [options]``.

Exit codes: 0 when every invariant holds, 1 when one fails (named on stderr),
2 for usage or configuration errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from . import __version__
from . import pipelines
from .errors import ConfigError, CRTwistorError, DomainError
from .expansion_solver import DEFAULT_ORDER_BOUND
from .models import crdata_from_json, max_degree

COMMANDS = ("verify-bergmann", "twistor-check", "nodal-check", "inverse-transform", "expand", "all")
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    order: int = 2
    samples: int = 1000
    seed: int = 0
    output: str | None = None
    tables: bool = True

    def validate(self) -> None:
        if not 0 <= self.order <= DEFAULT_ORDER_BOUND:
            raise ConfigError(f"--order must lie in 0..{DEFAULT_ORDER_BOUND}")
        if self.samples < 1:
            raise ConfigError("--samples must be positive")
        max_degree()  # surfaces a bad CRTWISTOR_MAX_DEGREE early


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="crtwistor", description="Exact checks for self-dual Einstein metrics with CR infinity.")
    p.add_argument("--version", action="version", version=f"crtwistor {__version__}")
    sub = p.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True
    helps = {
        "verify-bergmann": "Einstein and self-duality of the ball metric",
        "twistor-check": "random checks on the flag-manifold twistor model",
        "nodal-check": "normal sections and dimension counts on nodal curves",
        "inverse-transform": "metric reconstruction from the nodal-curve data",
        "expand": "formal boundary expansion of the Einstein metric",
        "all": "run every pipeline",
    }
    for name in COMMANDS:
        s = sub.add_parser(name, help=helps[name])
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--output", "--report", dest="output", help="write the JSON report here (default stdout)")
        if name in ("twistor-check", "inverse-transform", "all"):
            s.add_argument("--samples", type=int, default=1000 if name != "inverse-transform" else 20)
        if name in ("expand", "all"):
            s.add_argument("--input", help="CR data as JSON (default: Heisenberg)")
            s.add_argument("--order", type=int, default=2)
            s.add_argument("--no-tables", dest="tables", action="store_false",
                           help="leave the coefficient tables out of the report")
    return p


def parse_config(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    kw = {k: v for k, v in vars(ns).items() if v is not None}
    cfg = RunConfig(**kw)
    cfg.validate()
    return cfg


def load_input(path: str | None):
    if path is None:
        return None
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc.msg}") from None
    try:
        return crdata_from_json(obj)
    except DomainError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def execute(cfg: RunConfig) -> list:
    cr = load_input(cfg.input)
    todo = COMMANDS[:-1] if cfg.command == "all" else (cfg.command,)
    out = []
    for name in todo:
        if name == "verify-bergmann":
            out.append(pipelines.verify_bergmann(cfg.seed))
        elif name == "twistor-check":
            out.append(pipelines.twistor_check(cfg.samples, cfg.seed))
        elif name == "nodal-check":
            out.append(pipelines.nodal_check())
        elif name == "inverse-transform":
            n = cfg.samples if cfg.command == "inverse-transform" else 20
            out.append(pipelines.inverse_transform(cfg.seed, n))
        else:
            out.append(pipelines.expand(cr, cfg.order, tables=cfg.tables))
    return out


def render(cfg: RunConfig, reports: list) -> str:
    config = asdict(cfg)
    config.pop("output")  # where the report lands is not part of its content
    doc = {
        "config": config,
        "passed": all(r.passed for r in reports),
        "reports": [r.as_dict() for r in reports],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def run(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:  # --help and --version
        return EXIT_OK if not exc.code else EXIT_USAGE
    except ConfigError as exc:
        print(f"crtwistor: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        reports = execute(cfg)
    except ConfigError as exc:
        print(f"crtwistor: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CRTwistorError, ArithmeticError) as exc:
        print(f"crtwistor: FAIL {cfg.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    text = render(cfg, reports)
    if cfg.output:
        try:
            Path(cfg.output).write_text(text)
        except OSError as exc:
            print(f"crtwistor: error: cannot write {cfg.output}: {exc.strerror}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    failed = [f"{r.name}:{k}" for r in reports for k in r.failures()]
    for name in failed:
        print(f"crtwistor: FAIL {name}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def main(argv=None) -> int:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
