"""Discrete-event latency simulation and correctness checking of schedules."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import kernels
from .code_model import StabilizerCode
from .hardware import IONSWAP, Mapping, MappingError, QccdTopology, TimingModel, intratrap_swap_time
from .schedule import SHUTTLE_KINDS, Op, OpKind, Schedule, format_op


class SimulationError(ValueError):
    pass


@dataclass(frozen=True)
class Event:
    start: float
    end: float
    op: Op
    round: int

    def resource_keys(self) -> tuple:
        return _resource_keys(self.op)


@dataclass
class LatencyReport:
    total_us: float
    rounds_us: list[float]
    shuttles: int
    swaps: int
    cools: int
    per_trap_busy_us: list[float]
    final_mapping: tuple[tuple[int, ...], ...]
    events: list[Event] = field(default_factory=list, repr=False, compare=False)

    def to_dict(self) -> dict[str, Any]:
        return {
            "total_us": self.total_us,
            "rounds": list(self.rounds_us),
            "shuttles": self.shuttles,
            "swaps": self.swaps,
            "cools": self.cools,
            "per_trap_busy_us": list(self.per_trap_busy_us),
            "final_mapping": [list(c) for c in self.final_mapping],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "LatencyReport":
        return cls(
            float(data["total_us"]),
            [float(x) for x in data["rounds"]],
            int(data.get("shuttles", 0)),
            int(data.get("swaps", 0)),
            int(data.get("cools", 0)),
            [float(x) for x in data.get("per_trap_busy_us", [])],
            tuple(tuple(c) for c in data.get("final_mapping", [])),
        )


def _resource_keys(op: Op) -> tuple:
    if op.kind is OpKind.MOVE:
        if op.resource[0] == "seg":
            _, u, v = op.resource
            return (("seg", min(u, v), max(u, v)),)
        return (("jct", op.resource[1]),)
    if op.kind in (OpKind.SPLIT, OpKind.MERGE):
        return (("chain", op.trap),)
    if op.kind is OpKind.SWAP:
        return (("gate", op.trap), ("chain", op.trap))
    return (("gate", op.trap),)


def _expand(schedule: Schedule, topology: QccdTopology, timing: TimingModel):
    """Replay the schedule, check it is physically executable, insert cooling.

    Returns ``(ops, durations, rounds, final_mapping)``.
    """
    n_ions = schedule.n_data + schedule.n_ancilla
    if len(schedule.initial) != topology.n_traps:
        raise SimulationError(
            f"schedule has {len(schedule.initial)} traps, topology has {topology.n_traps}"
        )
    try:
        mapping = Mapping.from_chains(schedule.initial, topology)
    except MappingError as exc:
        raise SimulationError(f"bad initial mapping: {exc}") from None
    ops: list[Op] = []
    durations: list[float] = []
    rounds: list[int] = []
    for r, round_ops in enumerate(schedule.rounds):
        for op in round_ops:
            for ion in op.ions:
                if not 0 <= ion < n_ions:
                    raise SimulationError(f"unknown ion {ion} in {op}")
            if op.trap is not None and not 0 <= op.trap < topology.n_traps:
                raise SimulationError(f"unknown trap {op.trap} in {op}")
            try:
                dur = _duration(op, mapping, topology, timing)
                _apply(op, mapping)
            except MappingError as exc:
                raise SimulationError(f"{format_op(op, schedule.ion_name)}: {exc}") from None
            ops.append(op)
            durations.append(dur)
            rounds.append(r)
            if op.kind is OpKind.MERGE:
                ops.append(Op(OpKind.COOL, op.ions, trap=op.trap))
                durations.append(timing.cool)
                rounds.append(r)
    return ops, durations, rounds, mapping


def _duration(op: Op, mapping: Mapping, topology: QccdTopology, timing: TimingModel) -> float:
    kind = op.kind
    if kind is OpKind.SPLIT:
        return timing.split
    if kind is OpKind.MERGE:
        return timing.merge
    if kind is OpKind.MOVE:
        if op.resource[0] == "seg":
            u, v = op.resource[1:]
            if v not in topology.neighbors[u]:
                raise SimulationError(f"no segment between nodes {u} and {v}")
            return timing.move_per_segment
        node = topology.nodes[op.resource[1]]
        if node.kind not in ("X", "Y"):
            raise SimulationError(f"node {node.id} is not a junction")
        return timing.junction_time(node.kind)
    if kind is OpKind.SWAP:
        return intratrap_swap_time(timing, timing.swap_method, len(mapping.chains[op.trap]))
    if kind is OpKind.GATE2:
        return timing.gate2_time(topology.capacities[op.trap])
    if kind is OpKind.GATE1:
        return timing.gate1
    if kind is OpKind.MEASURE:
        return timing.measure
    if kind is OpKind.RESET:
        return timing.reset
    if kind is OpKind.COOL:
        return timing.cool
    raise SimulationError(f"unknown op kind {kind}")


def _apply(op: Op, mapping: Mapping) -> None:
    if op.kind is OpKind.SPLIT:
        mapping.split(op.ions[0], op.trap, op.side)
    elif op.kind is OpKind.MERGE:
        mapping.merge(op.ions[0], op.trap, op.side)
    elif op.kind is OpKind.SWAP:
        mapping.swap(op.trap, *op.ions)


def simulate(
    schedule: Schedule, topology: QccdTopology, timing: TimingModel | None = None
) -> LatencyReport:
    """Time a schedule with in-order list scheduling.

    Every op waits for its ions, its resources (trap gate slot, trap chain,
    segment or junction) and the end of the previous round. A cooling op on
    the destination trap follows every merge.
    """
    timing = timing or TimingModel()
    ops, durations, rounds, final = _expand(schedule, topology, timing)
    n_traps = topology.n_traps
    res_index: dict[tuple, int] = {}
    for t in range(n_traps):
        res_index[("gate", t)] = t
        res_index[("chain", t)] = n_traps + t
    ion_ptr = [0]
    ion_idx: list[int] = []
    res_ptr = [0]
    res_idx: list[int] = []
    for op in ops:
        ion_idx.extend(op.ions)
        ion_ptr.append(len(ion_idx))
        for key in _resource_keys(op):
            if key not in res_index:
                res_index[key] = len(res_index)
            res_idx.append(res_index[key])
        res_ptr.append(len(res_idx))
    n_ions = schedule.n_data + schedule.n_ancilla
    start, end = kernels.list_schedule(
        np.asarray(durations, dtype=np.float64),
        np.asarray(ion_ptr, dtype=np.int64),
        np.asarray(ion_idx, dtype=np.int64),
        np.asarray(res_ptr, dtype=np.int64),
        np.asarray(res_idx, dtype=np.int64),
        np.asarray(rounds, dtype=np.int64),
        n_ions,
        len(res_index),
    )
    start = start.tolist()
    end = end.tolist()
    events = [Event(s, e, op, r) for s, e, op, r in zip(start, end, ops, rounds)]

    rounds_us = []
    boundary = 0.0
    for r in range(len(schedule.rounds)):
        ends = [e.end for e in events if e.round == r]
        stop = max(ends, default=boundary)
        rounds_us.append(stop - boundary)
        boundary = stop
    busy = [0.0] * n_traps
    for ev in events:
        if ev.op.kind not in SHUTTLE_KINDS and ev.op.trap is not None:
            busy[ev.op.trap] += ev.end - ev.start
    return LatencyReport(
        total_us=max(end, default=0.0),
        rounds_us=rounds_us,
        shuttles=sum(1 for op in ops if op.kind is OpKind.MERGE),
        swaps=sum(1 for op in ops if op.kind is OpKind.SWAP),
        cools=sum(1 for op in ops if op.kind is OpKind.COOL),
        per_trap_busy_us=busy,
        final_mapping=final.freeze(),
        events=events,
    )


def format_events(report: LatencyReport, schedule: Schedule) -> str:
    lines = ["# start_us end_us op ions resource"]
    for ev in report.events:
        lines.append(f"{ev.start:.3f} {ev.end:.3f} {format_op(ev.op, schedule.ion_name)}")
    return "\n".join(lines) + "\n"


def theoretical_min_latency(code: StabilizerCode, timing: TimingModel | None = None) -> float:
    """``w*gate2 + 2*gate1 + measure`` for the heaviest stabilizer weight ``w``."""
    timing = timing or TimingModel()
    w = code.max_weight
    if w < 1:
        raise ValueError("code has no stabilizers")
    return w * timing.gate2 + 2 * timing.gate1 + timing.measure


@dataclass(frozen=True)
class Violation:
    index: int
    time_us: float | None
    message: str


@dataclass
class VerificationReport:
    violations: list[Violation]
    ops_checked: int

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first(self) -> Violation | None:
        return self.violations[0] if self.violations else None

    def summary(self) -> str:
        if self.ok:
            return f"ok: {self.ops_checked} ops, no violations"
        v = self.first
        when = f" at t={v.time_us:.3f}us" if v.time_us is not None else ""
        return f"{len(self.violations)} violation(s); first at op {v.index}{when}: {v.message}"


def verify(
    schedule: Schedule,
    code: StabilizerCode,
    topology: QccdTopology,
    timing: TimingModel | None = None,
    move_data: bool | None = None,
) -> VerificationReport:
    """Check a schedule against the code and hardware without raising.

    ``move_data=False`` additionally forbids shuttling data ions; by default
    it is inferred from the compiler name (only ``baseline`` may move data).
    """
    if move_data is None:
        move_data = schedule.compiler in ("", "baseline")
    name = schedule.ion_name
    violations: list[Violation] = []
    n_ions = schedule.n_data + schedule.n_ancilla

    def fail(k: int, msg: str) -> None:
        violations.append(Violation(k, None, msg))

    if schedule.n_data != code.n:
        fail(-1, f"schedule has {schedule.n_data} data ions, code has {code.n}")
    if len(schedule.initial) != topology.n_traps:
        fail(-1, f"schedule has {len(schedule.initial)} traps, topology has {topology.n_traps}")
        return VerificationReport(violations, 0)

    where: dict[int, int] = {}  # ion -> trap, only while resting
    node_of: dict[int, int] = {}  # ion -> graph node, only while in transit
    chains = [list(c) for c in schedule.initial]
    for t, chain in enumerate(chains):
        for ion in chain:
            if ion in where:
                fail(-1, f"{name(ion)} placed twice")
            where[ion] = t
        if len(chain) > topology.usable_capacity(t):
            fail(-1, f"trap {t} starts over capacity")
    for ion in range(n_ions):
        if ion not in where:
            fail(-1, f"{name(ion)} missing from the initial mapping")

    support = {s.id: set(s.qubits) for s in code.stabilizers}
    k = -1
    for r, round_ops in enumerate(schedule.rounds):
        measured: dict[int, int] = {}
        touched: dict[int, set[int]] = {}  # ancilla -> data coupled since last reset
        owner: dict[int, int] = {}  # ancilla -> stabilizer it currently serves
        dirty: set[int] = set()  # ancilla measured but not yet reset
        for op in round_ops:
            k += 1
            label = format_op(op, name)
            if any(not 0 <= i < n_ions for i in op.ions):
                fail(k, f"{label}: unknown ion")
                continue
            if op.trap is not None and not 0 <= op.trap < topology.n_traps:
                fail(k, f"{label}: unknown trap")
                continue
            kind = op.kind
            if kind in SHUTTLE_KINDS and not move_data and any(i < schedule.n_data for i in op.ions):
                fail(k, f"{label}: data ion shuttled under a move-ancilla-only policy")
            if kind is OpKind.SPLIT:
                ion = op.ions[0]
                chain = chains[op.trap]
                end = chain[0] if chain and op.side == "L" else chain[-1] if chain else None
                if where.get(ion) != op.trap or end != ion:
                    fail(k, f"{label}: ion not at the {op.side} end of trap {op.trap}")
                    continue
                chain.remove(ion)
                del where[ion]
                node_of[ion] = op.trap
            elif kind is OpKind.MOVE:
                ion = op.ions[0]
                if ion not in node_of:
                    fail(k, f"{label}: ion is not in transit")
                    continue
                if op.resource[0] == "seg":
                    _, u, v = op.resource
                    if node_of[ion] != u or v not in topology.neighbors[u]:
                        fail(k, f"{label}: discontinuous move from node {node_of[ion]}")
                    node_of[ion] = v
                elif node_of[ion] != op.resource[1]:
                    fail(k, f"{label}: junction crossed away from the ion")
            elif kind is OpKind.MERGE:
                ion = op.ions[0]
                if node_of.get(ion) != op.trap:
                    fail(k, f"{label}: ion has not arrived at trap {op.trap}")
                    continue
                del node_of[ion]
                if op.side == "L":
                    chains[op.trap].insert(0, ion)
                else:
                    chains[op.trap].append(ion)
                where[ion] = op.trap
                if len(chains[op.trap]) > topology.usable_capacity(op.trap):
                    fail(k, f"{label}: trap {op.trap} over capacity")
            elif kind is OpKind.SWAP:
                if any(where.get(i) != op.trap for i in op.ions):
                    fail(k, f"{label}: swap between ions not in trap {op.trap}")
                    continue
                a, b = op.ions
                chain = chains[op.trap]
                i, j = chain.index(a), chain.index(b)
                chain[i], chain[j] = chain[j], chain[i]
            elif kind is OpKind.GATE2:
                d, a = op.ions
                if d >= schedule.n_data or a < schedule.n_data:
                    fail(k, f"{label}: two-qubit gate must couple one data and one ancilla")
                    continue
                if where.get(d) is None or where.get(d) != where.get(a):
                    fail(k, f"{label}: not co-trapped")
                    continue
                if where[d] != op.trap:
                    fail(k, f"{label}: ions are in trap {where[d]}, not {op.trap}")
                if a in dirty:
                    fail(k, f"{label}: ancilla reused without reset")
                if op.stab is None or op.stab not in support or d not in support[op.stab]:
                    fail(k, f"{label}: data qubit not in the stabilizer support")
                    continue
                if owner.get(a, op.stab) != op.stab:
                    fail(k, f"{label}: ancilla still serving stabilizer {owner[a]}")
                owner[a] = op.stab
                got = touched.setdefault(a, set())
                if d in got:
                    fail(k, f"{label}: repeated coupling")
                got.add(d)
            elif kind in (OpKind.GATE1, OpKind.MEASURE, OpKind.RESET, OpKind.COOL):
                ion = op.ions[0]
                if where.get(ion) != op.trap:
                    fail(k, f"{label}: ion not resting in trap {op.trap}")
                    continue
                if kind is OpKind.MEASURE:
                    s = op.stab
                    if s not in support:
                        fail(k, f"{label}: unknown stabilizer")
                        continue
                    if touched.get(ion, set()) != support[s] or owner.get(ion) != s:
                        fail(k, f"{label}: measured before all couplings of s{s}")
                    measured[s] = measured.get(s, 0) + 1
                    dirty.add(ion)
                elif kind is OpKind.RESET:
                    dirty.discard(ion)
                    touched.pop(ion, None)
                    owner.pop(ion, None)
        for s in range(code.m):
            count = measured.get(s, 0)
            if count == 0:
                fail(k, f"round {r + 1}: stabilizer s{s} unmeasured")
            elif count > 1:
                fail(k, f"round {r + 1}: stabilizer s{s} measured {count} times")
        for a in sorted(dirty):
            fail(k, f"round {r + 1}: {name(a)} left unreset")
        if node_of:
            fail(k, f"round {r + 1}: ions left in transit")

    total = k + 1
    if violations:
        _stamp(violations, schedule, topology, timing)
    return VerificationReport(violations, total)


def _stamp(violations: list[Violation], schedule: Schedule, topology, timing) -> None:
    """Attach start times to violations when the schedule can still be timed."""
    try:
        report = simulate(schedule, topology, timing)
    except (SimulationError, MappingError, ValueError):
        return
    starts = [ev.start for ev in report.events if ev.op.kind is not OpKind.COOL]
    for i, v in enumerate(violations):
        if 0 <= v.index < len(starts):
            violations[i] = Violation(v.index, starts[v.index], v.message)
