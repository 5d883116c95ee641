"""Compile-verify-simulate pipelines, budget sweeps and suite tables."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

from .code_model import StabilizerCode, generate, parse_code
from .compilers import COMPILERS, compile_code, sweep_budgets
from .hardware import (
    QccdTopology,
    TimingModel,
    grid_for,
    load_hw_config,
    make_linear,
    parse_hw_shorthand,
)
from .schedule import Schedule
from .simulator import LatencyReport, simulate, verify

SWEEP_COLUMNS = ["code", "compiler", "budget", "rounds", "total_us", "per_round_us", "shuttles", "swaps", "argmin"]
SUITE_COLUMNS = [
    "code", "compiler", "budget", "rounds", "total_us", "per_round_us", "shuttles", "swaps",
    "speedup_vs_baseline_star",
]


class ExperimentError(RuntimeError):
    pass


def load_code(source: str) -> StabilizerCode:
    """``family:size`` shorthand, or a path to a code file."""
    path = Path(source)
    if path.is_file():
        return parse_code(path.read_text(), label=path.stem)
    return generate(source)


def load_hardware(source: str, code: StabilizerCode | None = None, capacity: int = 5
                  ) -> tuple[QccdTopology, TimingModel]:
    """Shorthand, config file, or ``linear``/``grid`` sized to the code's check count."""
    if source in ("linear", "grid"):
        if code is None:
            raise ExperimentError(f"'{source}' needs a code to size the machine")
        topo = make_linear(code.m, capacity) if source == "linear" else grid_for(code.m, capacity)
        return topo, TimingModel()
    path = Path(source)
    if path.is_file():
        return load_hw_config(path)
    return parse_hw_shorthand(source), TimingModel()


@dataclass
class RunResult:
    schedule: Schedule
    report: LatencyReport


def run_compile(
    code: StabilizerCode,
    topology: QccdTopology,
    timing: TimingModel,
    compiler: str,
    budget: int,
    rounds: int,
) -> RunResult:
    """Compile, verify (raising on any violation), then simulate."""
    if rounds < 1:
        raise ExperimentError("rounds must be >= 1")
    schedule = compile_code(compiler, code, topology, timing, budget, rounds)
    check = verify(schedule, code, topology, timing)
    if not check.ok:
        raise ExperimentError(f"{compiler} produced an invalid schedule: {check.summary()}")
    return RunResult(schedule, simulate(schedule, topology, timing))


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def sweep_rows(
    code: StabilizerCode,
    topology: QccdTopology,
    timing: TimingModel,
    compilers: Sequence[str],
    rounds: int,
    budgets: Sequence[int] | None = None,
) -> list[dict[str, str]]:
    rows = []
    for name in compilers:
        results = []
        for b in budgets or sweep_budgets(code.m):
            rep = run_compile(code, topology, timing, name, b, rounds).report
            results.append((b, rep))
        best = min(results, key=lambda br: (br[1].total_us, br[0]))[0]
        for b, rep in results:
            rows.append({
                "code": code.label,
                "compiler": name,
                "budget": str(b),
                "rounds": str(rounds),
                "total_us": _fmt(rep.total_us),
                "per_round_us": _fmt(rep.total_us / rounds),
                "shuttles": str(rep.shuttles),
                "swaps": str(rep.swaps),
                "argmin": "1" if b == best else "0",
            })
    return rows


def to_csv(rows: Iterable[dict[str, str]], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


@dataclass(frozen=True)
class SuiteTask:
    code: str
    hardware: str
    compilers: tuple[str, ...]
    budgets: tuple[int, ...] | str
    rounds: int
    capacity: int


def load_manifest(source: str | Path | dict[str, Any]) -> list[SuiteTask]:
    """Manifest keys: ``codes``, ``hardware`` (list), ``compilers``,
    ``budgets`` (``"sweep"``, ``"ends"`` or a list), ``rounds``, ``capacity``."""
    data = json.loads(Path(source).read_text()) if not isinstance(source, dict) else source
    hardware = data.get("hardware", ["linear"])
    if isinstance(hardware, str):
        hardware = [hardware]
    compilers = tuple(data.get("compilers", list(COMPILERS)))
    for name in compilers:
        if name not in COMPILERS:
            raise ExperimentError(f"unknown compiler {name!r} in manifest")
    budgets = data.get("budgets", "sweep")
    if not isinstance(budgets, str):
        budgets = tuple(int(b) for b in budgets)
    elif budgets not in ("sweep", "ends"):
        raise ExperimentError(f"budgets must be 'sweep', 'ends' or a list, got {budgets!r}")
    rounds = int(data.get("rounds", 2))
    if rounds < 1:
        raise ExperimentError("rounds must be >= 1")
    capacity = int(data.get("capacity", 5))
    return [
        SuiteTask(code, hw, compilers, budgets, rounds, capacity)
        for code in data.get("codes", [])
        for hw in hardware
    ]


def _budgets_for(task: SuiteTask, m: int) -> list[int]:
    if task.budgets == "sweep":
        return sweep_budgets(m)
    if task.budgets == "ends":
        return sorted({1, m})
    return [b for b in task.budgets if 1 <= b <= m] or [1]


def run_suite_task(task: SuiteTask) -> list[dict[str, str]]:
    """Rows for one (code, hardware) pair; failures become rows, never exceptions."""
    try:
        code = load_code(task.code)
        topo, timing = load_hardware(task.hardware, code, task.capacity)
    except Exception as exc:  # noqa: BLE001
        return [_error_row(task.code, name, "", task.rounds, exc) for name in task.compilers]
    label = f"{code.label or task.code}@{topo.name}"
    baseline_star = None
    try:
        baseline_star = min(
            run_compile(code, topo, timing, "baseline", b, task.rounds).report.total_us
            for b in sweep_budgets(code.m)
        )
    except Exception:  # noqa: BLE001
        pass
    rows = []
    for name in task.compilers:
        for b in _budgets_for(task, code.m):
            try:
                rep = run_compile(code, topo, timing, name, b, task.rounds).report
            except Exception as exc:  # noqa: BLE001
                rows.append(_error_row(label, name, b, task.rounds, exc))
                continue
            speed = "" if baseline_star is None or rep.total_us <= 0 else f"{baseline_star / rep.total_us:.4f}"
            rows.append({
                "code": label,
                "compiler": name,
                "budget": str(b),
                "rounds": str(task.rounds),
                "total_us": _fmt(rep.total_us),
                "per_round_us": _fmt(rep.total_us / task.rounds),
                "shuttles": str(rep.shuttles),
                "swaps": str(rep.swaps),
                "speedup_vs_baseline_star": speed,
            })
    return rows


def _error_row(code: str, compiler: str, budget, rounds: int, exc: Exception) -> dict[str, str]:
    msg = " ".join(str(exc).split()) or type(exc).__name__
    return {
        "code": code, "compiler": compiler, "budget": str(budget), "rounds": str(rounds),
        "total_us": f"error: {msg}", "per_round_us": "", "shuttles": "", "swaps": "",
        "speedup_vs_baseline_star": "",
    }


def run_suite(tasks: Sequence[SuiteTask], jobs: int = 1) -> str:
    """Suite CSV; rows follow manifest order whatever the completion order."""
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(run_suite_task, tasks))
    else:
        chunks = [run_suite_task(t) for t in tasks]
    return to_csv((row for chunk in chunks for row in chunk), SUITE_COLUMNS)
