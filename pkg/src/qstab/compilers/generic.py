"""Lookahead list scheduler shared by the baseline and move-ancilla-only compilers."""

from __future__ import annotations

from typing import Iterable, Sequence

from ..code_model import StabilizerCode
from ..hardware import QccdTopology, Router, TimingModel
from ..schedule import Op, Schedule
from .circuit import GateStep, stabilizer_circuit
from .lowering import Lowering, check_budget, initial_mapping
from .reverse import reverse_round


def _program(code: StabilizerCode, budget: int, trap_of: dict[int, int] | None) -> list[GateStep]:
    """Stabilizer ``s`` on ancilla ``s % budget``, in stabilizer order.

    With ``trap_of`` the gates of each check are grouped by data trap, traps
    taken in order of first appearance in the support.
    """
    steps: list[GateStep] = []
    for stab in code.stabilizers:
        order = None
        if trap_of is not None:
            traps: list[int] = []
            for q in stab.qubits:
                if trap_of[q] not in traps:
                    traps.append(trap_of[q])
            order = [q for t in traps for q in stab.qubits if trap_of[q] == t]
        steps.extend(stabilizer_circuit(stab, stab.id % budget, order))
    return steps


def _dependencies(steps: list[GateStep]) -> list[list[int]]:
    """Each step waits for the previous step on its ancilla and on its data qubit."""
    preds: list[list[int]] = [[] for _ in steps]
    last_anc: dict[int, int] = {}
    last_data: dict[int, int] = {}
    for k, step in enumerate(steps):
        if step.ancilla in last_anc:
            preds[k].append(last_anc[step.ancilla])
        last_anc[step.ancilla] = k
        if step.data is not None:
            if step.data in last_data:
                preds[k].append(last_data[step.data])
            last_data[step.data] = k
    return preds


def _depths(steps: list[GateStep], preds: list[list[int]], done: list[bool]) -> list[int]:
    depth = [0] * len(steps)
    for k in range(len(steps)):
        if done[k]:
            continue
        depth[k] = max((depth[p] + 1 for p in preds[k] if not done[p]), default=0)
    return depth


def _pair_weights(steps: list[GateStep], preds, done: list[bool]) -> dict[tuple[int, int], float]:
    """Interaction graph: each pending gate adds 1 if ready, else ``2**-depth``."""
    depth = _depths(steps, preds, done)
    weights: dict[tuple[int, int], float] = {}
    for k, step in enumerate(steps):
        if done[k] or step.kind != "gate2":
            continue
        key = (step.data, step.ancilla)
        weights[key] = weights.get(key, 0.0) + (1.0 if depth[k] == 0 else 2.0 ** -depth[k])
    return weights


def _forward_round(low: Lowering, steps: list[GateStep], move_data: bool) -> list[Op]:
    preds = _dependencies(steps)
    succs: list[list[int]] = [[] for _ in steps]
    waiting = [len(p) for p in preds]
    for k, ps in enumerate(preds):
        for p in ps:
            succs[p].append(k)
    done = [False] * len(steps)
    ready = {k for k in range(len(steps)) if waiting[k] == 0}
    low.start_round(steps)

    def finish(k: int) -> None:
        low.emit(steps[k])
        done[k] = True
        ready.discard(k)
        for nxt in succs[k]:
            waiting[nxt] -= 1
            if waiting[nxt] == 0:
                ready.add(nxt)

    while ready:
        local = sorted(k for k in ready if steps[k].kind != "gate2")
        if local:
            for k in local:
                finish(k)
            continue
        gates = sorted(ready)
        co = [
            k for k in gates
            if low.trap_of(steps[k].data) == low.trap_of(low.anc_ion(steps[k].ancilla))
        ]
        if co:
            finish(co[0])
            continue
        weights = _pair_weights(steps, preds, done)
        k = min(gates, key=lambda g: (-weights[(steps[g].data, steps[g].ancilla)], g))
        step = steps[k]
        a = low.anc_ion(step.ancilla)
        d = step.data
        anc_trap, data_trap = low.trap_of(a), low.trap_of(d)
        if move_data and low.move_cost(d, anc_trap) < low.move_cost(a, data_trap):
            low.move(d, anc_trap, pinned=(a,))
        else:
            low.move(a, data_trap, pinned=(d,))
        finish(k)
    if not all(done):
        raise RuntimeError("dependency cycle in stabilizer program")
    return low.ops


def compile_generic(
    code: StabilizerCode,
    topology: QccdTopology,
    timing: TimingModel | None,
    ancilla_budget: int,
    rounds: int,
    *,
    move_data: bool,
    name: str,
    initial: Sequence[Iterable[int]] | None = None,
) -> Schedule:
    timing = timing or TimingModel()
    check_budget(code, ancilla_budget)
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    router = Router(topology, timing)
    mapping = initial_mapping(code, topology, ancilla_budget, router, initial)
    start = mapping.freeze()
    trap_of = None
    if not move_data:
        trap_of = {q: t for t, chain in enumerate(mapping.chains) for q in chain if q < code.n}
    steps = _program(code, ancilla_budget, trap_of)
    low = Lowering(code.n, topology, router, mapping, move_data)
    forward = list(_forward_round(low, steps, move_data))
    backward = reverse_round(forward)
    schedule = Schedule(code.n, ancilla_budget, start, [], name, code.label)
    for r in range(rounds):
        schedule.rounds.append(list(forward if r % 2 == 0 else backward))
    return schedule


def compile_baseline(
    code: StabilizerCode,
    topology: QccdTopology,
    timing: TimingModel | None = None,
    ancilla_budget: int = 1,
    rounds: int = 1,
    initial: Sequence[Iterable[int]] | None = None,
) -> Schedule:
    """Generic lookahead compiler that shuttles whichever ion is cheaper to move.

    Odd rounds run forward; even rounds replay the first round in reverse,
    which returns every ion to its starting trap.
    """
    return compile_generic(
        code, topology, timing, ancilla_budget, rounds, move_data=True, name="baseline", initial=initial
    )


def compile_mao(
    code: StabilizerCode,
    topology: QccdTopology,
    timing: TimingModel | None = None,
    ancilla_budget: int = 1,
    rounds: int = 1,
    initial: Sequence[Iterable[int]] | None = None,
) -> Schedule:
    """Same loop as :func:`compile_baseline` but only ancilla ever move."""
    return compile_generic(
        code, topology, timing, ancilla_budget, rounds, move_data=False, name="mao", initial=initial
    )
