"""``qstab`` command line."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import noise
from .code_model import CodeError, GENERATORS
from .compilers import COMPILERS, CompileError
from .experiments import (
    SWEEP_COLUMNS,
    ExperimentError,
    load_code,
    load_hardware,
    load_manifest,
    run_compile,
    run_suite,
    sweep_rows,
    to_csv,
)
from .hardware import HardwareError, MappingError
from .placement import PlacementError, SaturationError
from .schedule import ScheduleFormatError, loads
from .simulator import LatencyReport, SimulationError, format_events, simulate, verify

EXPECTED = (
    CodeError, CompileError, ExperimentError, HardwareError, MappingError, PlacementError,
    SaturationError, ScheduleFormatError, SimulationError, noise.NoiseError, OSError,
    json.JSONDecodeError,
)


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _cmd_gen_code(args) -> int:
    code = GENERATORS[args.family](args.size)
    _write(args.output, code.to_text())
    return 0


def _cmd_dump_code(args) -> int:
    _write(args.output, load_code(args.code).to_text())
    return 0


def _cmd_compile(args) -> int:
    code = load_code(args.code)
    topo, timing = load_hardware(args.hw, code, args.capacity)
    result = run_compile(code, topo, timing, args.compiler, args.ancilla_budget, args.rounds)
    if args.schedule:
        _write(args.schedule, result.schedule.dumps())
    if args.dump_mapping:
        lines = [
            f"{t}: " + " ".join(result.schedule.ion_name(i) for i in chain)
            for t, chain in enumerate(result.schedule.initial)
        ]
        _write(args.dump_mapping, "\n".join(lines) + "\n")
    if args.emit_events:
        _write(args.emit_events, format_events(result.report, result.schedule))
    _write(args.output, result.report.dumps())
    return 0


def _cmd_simulate(args) -> int:
    schedule = loads(Path(args.schedule).read_text())
    topo, timing = load_hardware(args.hw)
    report = simulate(schedule, topo, timing)
    if args.emit_events:
        _write(args.emit_events, format_events(report, schedule))
    _write(args.output, report.dumps())
    return 0


def _cmd_verify(args) -> int:
    schedule = loads(Path(args.schedule).read_text())
    code = load_code(args.code)
    topo, timing = load_hardware(args.hw, code)
    result = verify(schedule, code, topo, timing)
    print(result.summary())
    for v in result.violations[1:]:
        print(f"  op {v.index}: {v.message}")
    return 0 if result.ok else 1


def _cmd_noise(args) -> int:
    report = LatencyReport.from_dict(json.loads(Path(args.report).read_text()))
    budgets = noise.error_budget(report, args.p, args.t1, args.t2)
    _write(args.output, noise.dumps(budgets))
    return 0


def _cmd_sweep(args) -> int:
    code = load_code(args.code)
    topo, timing = load_hardware(args.hw, code, args.capacity)
    rows = sweep_rows(code, topo, timing, args.compiler, args.rounds)
    _write(args.output, to_csv(rows, SWEEP_COLUMNS))
    return 0


def _cmd_suite(args) -> int:
    tasks = load_manifest(args.manifest)
    _write(args.output, run_suite(tasks, args.jobs))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qstab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-code", help="generate a code in the text format")
    p.add_argument("family", choices=sorted(GENERATORS))
    p.add_argument("size", type=int, help="distance, or length for repetition codes")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_gen_code)

    p = sub.add_parser("dump-code", help="print a code (shorthand or file) in the text format")
    p.add_argument("code")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_dump_code)

    def hw_args(p, sized: bool = True) -> None:
        p.add_argument("--hw", default="linear" if sized else None, required=not sized,
                       help="linear:<traps>x<cap>, grid:<r>x<c>x<cap>, a JSON file"
                       + (", or linear/grid sized to the code" if sized else ""))
        if sized:
            p.add_argument("--capacity", type=_positive, default=5)

    p = sub.add_parser("compile", help="compile, verify and simulate")
    p.add_argument("--code", required=True)
    hw_args(p)
    p.add_argument("--compiler", choices=list(COMPILERS), default="moveless")
    p.add_argument("--ancilla-budget", type=_positive, default=1)
    p.add_argument("--rounds", type=_positive, default=1)
    p.add_argument("-o", "--output", help="latency report (JSON)")
    p.add_argument("--schedule", help="write the schedule here")
    p.add_argument("--dump-mapping", help="write the initial mapping here")
    p.add_argument("--emit-events", help="write the timed event log here")
    p.set_defaults(func=_cmd_compile)

    p = sub.add_parser("simulate", help="time a schedule file")
    p.add_argument("--schedule", required=True)
    hw_args(p, sized=False)
    p.add_argument("-o", "--output")
    p.add_argument("--emit-events")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("verify", help="check a schedule file; exit 1 on violations")
    p.add_argument("--schedule", required=True)
    p.add_argument("--code", required=True)
    hw_args(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("noise", help="latency report to error-channel parameters")
    p.add_argument("--report", required=True)
    p.add_argument("-p", type=float, required=True)
    p.add_argument("--t1", type=float, help="override T1 (seconds)")
    p.add_argument("--t2", type=float, help="override T2 (seconds)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_noise)

    p = sub.add_parser("sweep", help="latency over the six-point ancilla budget sweep (CSV)")
    p.add_argument("--code", required=True)
    hw_args(p)
    p.add_argument("--compiler", choices=list(COMPILERS), action="append")
    p.add_argument("--ancilla-budget", choices=["sweep"], default="sweep")
    p.add_argument("--rounds", type=_positive, default=2)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("suite", help="run a JSON manifest and emit the suite CSV")
    p.add_argument("manifest")
    p.add_argument("-j", "--jobs", type=_positive, default=1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_suite)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "sweep" and not args.compiler:
        args.compiler = ["baseline"]
    try:
        return args.func(args)
    except EXPECTED as exc:
        print(f"qstab {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
