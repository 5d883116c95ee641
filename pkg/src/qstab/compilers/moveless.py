"""Dynamic stabilizer scheduling with pinned data and reusable ancilla."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .. import kernels
from ..code_model import Stabilizer, StabilizerCode
from ..hardware import GATESWAP, Mapping, QccdTopology, Router, TimingModel
from ..schedule import Schedule
from .circuit import stabilizer_circuit
from .lowering import Lowering, check_budget, initial_mapping

_SIDE = {"L": 0, "R": 1, None: 2}


@dataclass(frozen=True)
class MovementScore:
    stab: int
    ancilla: int
    score: float
    order: tuple[int, ...] = ()  # trap visit order


class _Tables:
    """Router data as dense arrays for the kernels."""

    def __init__(self, router: Router) -> None:
        n = router.topology.n_traps
        self.hop = np.asarray(router.hop, dtype=np.float64).reshape(n, n)
        self.exit = np.array(
            [[_SIDE[router.paths[a][b].exit_side] for b in range(n)] for a in range(n)], dtype=np.int64
        ).reshape(n, n)
        self.entry = np.array(
            [[_SIDE[router.paths[a][b].entry_side] for b in range(n)] for a in range(n)], dtype=np.int64
        ).reshape(n, n)
        timing = router.timing
        if timing.swap_method == GATESWAP:
            self.swap_const, self.swap_per_ion = timing.gateswap, 0.0
        else:
            self.swap_const, self.swap_per_ion = 0.0, timing.ionswap_per_ion


def _occupancy(mapping: Mapping) -> np.ndarray:
    return np.array([len(c) for c in mapping.chains], dtype=np.int64)


def _support_traps(stab: Stabilizer, trap_of: dict[int, int]) -> list[int]:
    return sorted({trap_of[q] for q in stab.qubits})


def movement_score(
    stab: Stabilizer,
    ancilla_ion: int,
    mapping: Mapping,
    topology: QccdTopology,
    timing: TimingModel | None = None,
    router: Router | None = None,
) -> MovementScore:
    """Projected shuttle time for ``ancilla_ion`` to serve ``stab`` from where it is.

    The ancilla tours the traps holding the support, always hopping to the
    cheapest unvisited one next (ties to the lower trap id). Each hop costs
    split, transit and merge, plus a repositioning swap when the ancilla is
    not at the chain end facing the route.
    """
    router = router or Router(topology, timing or TimingModel())
    tables = _Tables(router)
    loc = mapping.location
    start = loc[ancilla_ion]
    cost, order = kernels.itinerary(
        start,
        kernels.SIDE_CODES[mapping.side_state(ancilla_ion)],
        np.array(_support_traps(stab, loc), dtype=np.int64),
        tables.hop,
        tables.exit,
        tables.entry,
        _occupancy(mapping),
        tables.swap_const,
        tables.swap_per_ion,
    )
    return MovementScore(stab.id, ancilla_ion, float(cost), tuple(int(t) for t in order))


def _run_stabilizer(low: Lowering, stab: Stabilizer, ancilla: int, visit: Sequence[int]) -> None:
    """Walk the ancilla through ``visit``, running the gates on each trap's data."""
    a = low.anc_ion(ancilla)
    data_trap = {q: low.trap_of(q) for q in stab.qubits}
    order = [q for t in visit for q in stab.qubits if data_trap[q] == t]
    steps = stabilizer_circuit(stab, ancilla, order)
    for step in steps:
        if step.kind == "gate2":
            low.move(a, data_trap[step.data])
        low.emit(step)


def compile_moveless(
    code: StabilizerCode,
    topology: QccdTopology,
    timing: TimingModel | None = None,
    ancilla_budget: int = 1,
    rounds: int = 1,
    initial: Sequence[Iterable[int]] | None = None,
    reorder: bool = True,
) -> Schedule:
    """Pick the cheapest (stabilizer, ancilla) pair at every step.

    Every unmeasured stabilizer is scored against every ancilla, used or not,
    and the global minimum runs next. Exact ties go to the pair whose gates
    wait least in total for shuttling, then to the lower stabilizer id and
    ancilla id. The chosen check's gates follow the greedy trap tour. Data
    never move, so every round starts from the same data placement. ``reorder=False``
    gives the static order instead: stabilizers by id, ancilla round-robin,
    gates in support order.
    """
    timing = timing or TimingModel()
    check_budget(code, ancilla_budget)
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    router = Router(topology, timing)
    mapping = initial_mapping(code, topology, ancilla_budget, router, initial)
    schedule = Schedule(code.n, ancilla_budget, mapping.freeze(), [], "moveless", code.label)
    low = Lowering(code.n, topology, router, mapping, move_data=False)
    tables = _Tables(router)
    data_trap = {q: t for t, chain in enumerate(mapping.chains) for q in chain if q < code.n}
    stab_traps = [_support_traps(s, data_trap) for s in code.stabilizers]

    for _ in range(rounds):
        low.start_round(
            step
            for s in code.stabilizers
            for step in stabilizer_circuit(s, 0)
            if step.kind == "gate2"
        )
        for a in range(ancilla_budget):
            low.pending.pop(low.anc_ion(a), None)
        if not reorder:
            for s in code.stabilizers:
                _run_static(low, s, s.id % ancilla_budget)
            schedule.rounds.append(low.ops)
            continue
        remaining = list(range(code.m))
        while remaining:
            scores = _scores(low, tables, [stab_traps[s] for s in remaining], ancilla_budget)
            best = scores.min()
            picks = []
            for si, a in zip(*np.nonzero(scores == best)):  # row-major order
                s = remaining[si]
                order = _tour(low, tables, low.anc_ion(int(a)), stab_traps[s])
                accrued = _gate_weighted_cost(low, tables, code.stabilizers[s], low.anc_ion(int(a)), order)
                picks.append((accrued, s, int(a), order))
            _, s, a, order = min(picks, key=lambda p: p[:3])
            remaining.remove(s)
            _run_stabilizer(low, code.stabilizers[s], a, order)
        schedule.rounds.append(low.ops)
    return schedule


def _tour(low: Lowering, tables: _Tables, ion: int, traps: list[int]) -> list[int]:
    _, order = kernels.itinerary(
        low.trap_of(ion),
        kernels.SIDE_CODES[low.mapping.side_state(ion)],
        np.array(traps, dtype=np.int64),
        tables.hop, tables.exit, tables.entry, _occupancy(low.mapping),
        tables.swap_const, tables.swap_per_ion,
    )
    return [int(t) for t in order]


def _leg_costs(low: Lowering, tables: _Tables, ion: int, order: Sequence[int]) -> list[float]:
    """Cost of each hop of a tour, matching the itinerary kernel."""
    occ = _occupancy(low.mapping)
    cur = low.trap_of(ion)
    state = kernels.SIDE_CODES[low.mapping.side_state(ion)]
    chain = int(occ[cur])
    legs = []
    for t in order:
        if t == cur:
            legs.append(0.0)
            continue
        c = float(tables.hop[cur, t])
        if chain > 1 and state != kernels.BOTH_ENDS and state != tables.exit[cur, t]:
            c += tables.swap_const + tables.swap_per_ion * chain
        legs.append(c)
        chain = int(occ[t]) + 1
        state = int(tables.entry[cur, t]) if chain > 1 else kernels.BOTH_ENDS
        cur = t
    return legs


def _gate_weighted_cost(
    low: Lowering, tables: _Tables, stab: Stabilizer, ion: int, order: Sequence[int]
) -> float:
    """Sum over the check's gates of the shuttle time spent before each one."""
    per_trap = {}
    for q in stab.qubits:
        t = low.trap_of(q)
        per_trap[t] = per_trap.get(t, 0) + 1
    total = elapsed = 0.0
    for t, leg in zip(order, _leg_costs(low, tables, ion, order)):
        elapsed += leg
        total += elapsed * per_trap[t]
    return total


def _run_static(low: Lowering, stab: Stabilizer, ancilla: int) -> None:
    a = low.anc_ion(ancilla)
    for step in stabilizer_circuit(stab, ancilla):
        if step.kind == "gate2":
            low.move(a, low.trap_of(step.data))
        low.emit(step)


def _scores(low: Lowering, tables: _Tables, traps: list[list[int]], budget: int) -> np.ndarray:
    mapping = low.mapping
    loc = mapping.location
    ions = [low.anc_ion(a) for a in range(budget)]
    ptr = np.zeros(len(traps) + 1, dtype=np.int64)
    ptr[1:] = np.cumsum([len(t) for t in traps])
    flat = np.array([t for ts in traps for t in ts], dtype=np.int64)
    return kernels.score_matrix(
        tables.hop, tables.exit, tables.entry, _occupancy(mapping),
        np.array([loc[i] for i in ions], dtype=np.int64),
        np.array([kernels.SIDE_CODES[mapping.side_state(i)] for i in ions], dtype=np.int64),
        ptr, flat, tables.swap_const, tables.swap_per_ion,
    )
