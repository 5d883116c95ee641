"""Shared state for turning logical steps into atomic QCCD ops."""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Sequence

from ..code_model import StabilizerCode
from ..hardware import Mapping, QccdTopology, Router
from ..placement import Partition, PlacementError, partition_data, rebalance
from ..schedule import Op, OpKind, shuttle_ops
from .circuit import GateStep


class CompileError(ValueError):
    pass


def check_budget(code: StabilizerCode, budget: int) -> None:
    if code.m < 1:
        raise CompileError("code has no stabilizers to extract")
    if not 1 <= budget <= code.m:
        raise CompileError(f"ancilla budget {budget} outside [1, {code.m}]")


def initial_mapping(
    code: StabilizerCode,
    topology: QccdTopology,
    budget: int,
    router: Router,
    initial: Sequence[Iterable[int]] | None = None,
) -> Mapping:
    """Placement-derived starting chains, or ``initial`` if given."""
    if initial is not None:
        mapping = Mapping.from_chains(initial, topology)
        ions = sorted(i for c in mapping.chains for i in c)
        if ions != list(range(code.n + budget)):
            raise CompileError(f"initial mapping must hold exactly ions 0..{code.n + budget - 1}")
        return mapping
    try:
        part: Partition = partition_data(code, topology, budget, router=router)
    except PlacementError as exc:
        raise CompileError(str(exc)) from None
    return part.mapping(topology, code.n)


class Lowering:
    """Emits ops for one round while tracking the mapping.

    ``move_data`` controls whether data ions may be shuttled, either to meet
    an ancilla or when evicted from a full trap.
    """

    def __init__(
        self,
        n_data: int,
        topology: QccdTopology,
        router: Router,
        mapping: Mapping,
        move_data: bool,
    ) -> None:
        self.n_data = n_data
        self.topology = topology
        self.router = router
        self.mapping = mapping
        self.move_data = move_data
        self.ops: list[Op] = []
        self.pending: Counter[int] = Counter()
        self.arrival: dict[int, int] = {}
        self._clock = 0

    def start_round(self, steps: Iterable[GateStep]) -> None:
        self.ops = []
        self.pending = Counter()
        for step in steps:
            if step.kind == "gate2":
                self.pending[step.data] += 1
                self.pending[self.anc_ion(step.ancilla)] += 1

    def anc_ion(self, ancilla: int) -> int:
        return self.n_data + ancilla

    def trap_of(self, ion: int) -> int:
        return self.mapping.trap_of(ion)

    def move(self, ion: int, dest: int, pinned: Iterable[int] = ()) -> None:
        """Shuttle ``ion`` into ``dest``, evicting someone first if it is full."""
        if self.trap_of(ion) == dest:
            return
        if self.mapping.free(dest) <= 0:
            evict = rebalance(
                self.mapping,
                self.topology,
                dest,
                router=self.router,
                can_evict=lambda i: self.move_data or i >= self.n_data,
                pending=lambda i: self.pending[i],
                arrival=self.arrival,
                pinned={ion, *pinned},
            )
            self._record(evict)
        self._record(shuttle_ops(self.mapping, self.router, ion, dest))

    def _record(self, ops: list[Op]) -> None:
        for op in ops:
            if op.kind is OpKind.MERGE:
                self._clock += 1
                self.arrival[op.ions[0]] = self._clock
        self.ops.extend(ops)

    def emit(self, step: GateStep) -> None:
        a = self.anc_ion(step.ancilla)
        trap = self.trap_of(a)
        if step.kind == "gate2":
            if self.trap_of(step.data) != trap:
                raise CompileError(f"gate on d{step.data} and a{step.ancilla} not co-trapped")
            self.ops.append(Op(OpKind.GATE2, (step.data, a), trap=trap, stab=step.stab, pauli=step.pauli))
            self.pending[step.data] -= 1
            if self.pending[a] > 0:
                self.pending[a] -= 1
            return
        kind = {"gate1": OpKind.GATE1, "measure": OpKind.MEASURE, "reset": OpKind.RESET}[step.kind]
        self.ops.append(Op(kind, (a,), trap=trap, stab=step.stab, pauli=step.pauli))

    def move_cost(self, ion: int, dest: int) -> float:
        src = self.trap_of(ion)
        if src == dest:
            return 0.0
        path = self.router.path(src, dest)
        cost = self.router.hop[src][dest]
        if self.mapping.side_state(ion) not in (path.exit_side, "B"):
            cost += self.router.swap_time(self.mapping.occupancy(src))
        return cost
