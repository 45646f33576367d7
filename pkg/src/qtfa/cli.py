"""Command-line front end.

    qtfa qft --signal s.json [--dump-field out.bin]
    qtfa qwft|ambiguity|wigner|reconstruct --signal s.json --window g.json
    qtfa verify --suite plancherel --seed 7 [--output report.json]

Every command writes a report document (JSON by default, CSV with
``--format csv``) to ``--output`` or stdout. Exit status: 0 when every check
passes, 1 when one fails, 2 for a bad config or spec file.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from typing import Optional, Sequence

from . import __version__
from .fft import is_power_of_two
from .grid import GridSpec
from .io import SignalSpec, SpecError, load_signal_spec, write_field, write_signal
from .qft import plancherel_qft_check, qft_fast
from .qwft import plancherel_qwft_check, qwft, reconstruct
from .reports import InequalityReport
from .suites import SUITES, run_suites
from .tfdist import ambiguity, ambiguity_relation_check, wigner, wigner_relation_check

__all__ = ["RunConfig", "COMMANDS", "SCHEMA_VERSION", "build_parser", "config_from_args", "run", "main"]

COMMANDS = ("qft", "qwft", "ambiguity", "wigner", "reconstruct", "verify")
FORMATS = ("json", "csv")
SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RunConfig:
    command: str
    signal_spec: Optional[str] = None
    window_spec: Optional[str] = None
    d: Optional[int] = None
    N: Optional[int] = None
    L: Optional[float] = None
    suite: str = "all"
    output: Optional[str] = None
    format: str = "json"
    seed: int = 0
    dump_field: Optional[str] = None
    timestamp: bool = True

    def validate(self):
        if self.command not in COMMANDS:
            raise SpecError(f"unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise SpecError(f"unknown format {self.format!r}")
        if self.d is not None and self.d < 1:
            raise SpecError(f"d must be >= 1, got {self.d}")
        if self.N is not None and not is_power_of_two(self.N):
            raise SpecError(f"N must be a power of two, got {self.N}")
        if self.L is not None and not self.L > 0:
            raise SpecError(f"L must be positive, got {self.L}")
        if self.command == "verify":
            if self.suite not in SUITES + ("all",):
                raise SpecError(f"unknown suite {self.suite!r}")
        else:
            if self.signal_spec is None:
                raise SpecError(f"{self.command} needs --signal")
            if self.command != "qft" and self.window_spec is None:
                raise SpecError(f"{self.command} needs --window")

    def to_dict(self) -> dict:
        out = asdict(self)
        del out["timestamp"]
        return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qtfa", description="Quaternion time-frequency transforms and checks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--signal", dest="signal_spec")
        p.add_argument("--window", dest="window_spec")
        p.add_argument("--d", type=int)
        p.add_argument("--N", type=int)
        p.add_argument("--L", type=float)
        p.add_argument("--suite", default="all")
        p.add_argument("--output")
        p.add_argument("--format", default="json")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--dump-field", dest="dump_field")
        p.add_argument("--no-timestamp", dest="timestamp", action="store_false")
    return parser


def config_from_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    return RunConfig(**vars(ns))


def _grid(config: RunConfig, spec: Optional[SignalSpec]) -> GridSpec:
    if spec is None:
        spec = SignalSpec()
    return spec.grid(config.d, config.N, config.L)


def _load(config: RunConfig):
    spec = load_signal_spec(config.signal_spec)
    grid = _grid(config, spec)
    f = spec.build(grid)
    g = None
    if config.window_spec is not None:
        wspec = load_signal_spec(config.window_spec)
        g = wspec.build(grid)
    return grid, f, g


def _transform(config: RunConfig) -> tuple[GridSpec, list[InequalityReport]]:
    grid, f, g = _load(config)
    return grid, _transform_reports(config, grid, f, g)


def _transform_reports(config, grid, f, g) -> list[InequalityReport]:
    cmd = config.command
    if cmd == "qft":
        F = qft_fast(f)
        if config.dump_field:
            write_signal(F, config.dump_field)
        return [plancherel_qft_check(f)]
    if cmd == "ambiguity":
        A = ambiguity(f, g)
        if config.dump_field:
            write_field(A, config.dump_field)
        return ambiguity_relation_check(f, g, A=A)
    if cmd == "wigner":
        W = wigner(f, g)
        if config.dump_field:
            write_field(W, config.dump_field)
        return [wigner_relation_check(f, g, W=W)]
    G = qwft(f, g)
    if config.dump_field:
        write_field(G, config.dump_field)
    if cmd == "reconstruct":
        back = reconstruct(G, g)
        return [InequalityReport.pointwise("reconstruction", back.values, f.values, 1e-8,
                                           parameters={"d": grid.d, "N": grid.n_per_axis, "L": grid.half_extent})]
    return [plancherel_qwft_check(f, g, G)]


def _collect(config: RunConfig) -> tuple[GridSpec, list[InequalityReport]]:
    if config.command == "verify":
        grid = _grid(config, None)
        return grid, run_suites(config.suite, grid, config.seed)
    return _transform(config)


def render(config: RunConfig, reports: list[InequalityReport], timestamp: Optional[str] = None,
           grid: Optional[GridSpec] = None) -> str:
    if config.format == "csv":
        return _render_csv(reports)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "config": config.to_dict(),
        "grid": None if grid is None else {"d": grid.d, "N": grid.n_per_axis, "L": grid.half_extent},
        "suite": config.suite if config.command == "verify" else config.command,
        "summary": {
            "checks": len(reports),
            "passed": sum(r.passed for r in reports),
            "failed": sum(not r.passed for r in reports),
        },
        "reports": [r.to_dict() for r in reports],
    }
    if timestamp is not None:
        doc["timestamp"] = timestamp
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _cell(value):
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True)
    return value


def _render_csv(reports: list[InequalityReport]) -> str:
    rows = [r.to_dict() for r in reports]
    const_keys = sorted({k for row in rows for k in row["constant_values"]})
    head = ["suite", "name", "kind", "pass", "lhs", "rhs", "margin", "parameters"]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(head + [f"const_{k}" for k in const_keys])
    for row in rows:
        line = [row["metadata"].get("suite", ""), row["name"], row["kind"], row["pass"],
                row["lhs"], row["rhs"], row["margin"], _cell(row["parameters"])]
        line += [_cell(row["constant_values"].get(k, "")) for k in const_keys]
        writer.writerow([_cell(v) for v in line])
    return buf.getvalue()


def run(config: RunConfig, stdout=None, stderr=None) -> int:
    """Execute one command; returns the exit status."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        config.validate()
        grid, reports = _collect(config)
    except (SpecError, ValueError) as exc:
        print(f"qtfa: error: {exc}", file=stderr)
        return 2
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds") if config.timestamp else None
    text = render(config, reports, stamp, grid)
    if config.output:
        with open(config.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    failed = [r for r in reports if not r.passed]
    for r in failed:
        print(f"FAIL {r.name} margin={r.margin:.3g} {r.parameters}", file=stderr)
    return 1 if failed else 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = config_from_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help/--version and 2 on usage errors
        return exc.code if isinstance(exc.code, int) else 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
