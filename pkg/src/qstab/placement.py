"""Initial placement of data and ancilla ions, and trap rebalancing."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import Callable, Iterable

from .code_model import StabilizerCode, tanner_graph
from .hardware import Mapping, QccdTopology, Router, TimingModel
from .schedule import Op, shuttle_ops


class PlacementError(ValueError):
    pass


class SaturationError(RuntimeError):
    """No trap can take an evicted ion; compilation cannot proceed."""


@dataclass(frozen=True)
class Partition:
    data: tuple[frozenset[int], ...]  # per trap
    ancilla: tuple[int, ...]  # trap of each ancilla
    reserve: int = 1

    def trap_of_data(self) -> dict[int, int]:
        return {q: t for t, qs in enumerate(self.data) for q in qs}

    def mapping(self, topology: QccdTopology, n_data: int) -> Mapping:
        """Chains with data in index order, then ancilla appended on the right."""
        chains = [sorted(qs) for qs in self.data]
        for j, t in enumerate(self.ancilla):
            chains[t].append(n_data + j)
        return Mapping.from_chains(chains, topology)


def _bfs_data_order(code: StabilizerCode) -> list[int]:
    graph = tanner_graph(code)
    order: list[int] = []
    seen_data: set[int] = set()
    seen_checks: set[int] = set()
    for start in range(code.n):
        if start in seen_data:
            continue
        seen_data.add(start)
        queue = deque([start])
        while queue:
            q = queue.popleft()
            order.append(q)
            for c in sorted(graph.data_adj[q]):
                if c in seen_checks:
                    continue
                seen_checks.add(c)
                for nq in graph.check_adj[c]:
                    if nq not in seen_data:
                        seen_data.add(nq)
                        queue.append(nq)
    return order


def cotrapped_edges(code: StabilizerCode, trap_of: dict[int, int]) -> int:
    """Tanner edges that land in each check's plurality trap, summed over checks."""
    total = 0
    for s in code.stabilizers:
        counts = Counter(trap_of[q] for q in s.qubits)
        total += max(counts.values())
    return total


def plurality_trap(qubits: Iterable[int], trap_of: dict[int, int]) -> int:
    counts = Counter(trap_of[q] for q in qubits)
    best = max(counts.values())
    return min(t for t, c in counts.items() if c == best)


def partition_data(
    code: StabilizerCode,
    topology: QccdTopology,
    ancilla_budget: int,
    reserve: int = 1,
    router: Router | None = None,
) -> Partition:
    """Greedy placement maximising co-trapped Tanner edges.

    Data are packed trap by trap in breadth-first Tanner order, then single
    data relocations are applied while they strictly improve
    :func:`cotrapped_edges`. Each trap keeps ``reserve`` slots free of data.
    Ancilla ``j`` starts in the plurality trap of stabilizer ``j`` when it has
    room, otherwise in the cheapest-to-reach trap that does.
    """
    if ancilla_budget < 1:
        raise PlacementError("ancilla budget must be >= 1")
    n_traps = topology.n_traps
    data_room = [max(topology.usable_capacity(t) - reserve, 0) for t in range(n_traps)]
    if code.n > sum(data_room) or code.n + ancilla_budget > topology.total_capacity:
        raise PlacementError(
            f"{code.n} data + {ancilla_budget} ancilla do not fit in {n_traps} traps "
            f"(usable {topology.total_capacity}, reserve {reserve} per trap)"
        )

    trap_of: dict[int, int] = {}
    load = [0] * n_traps
    t = 0
    for q in _bfs_data_order(code):
        while load[t] >= data_room[t]:
            t += 1
        trap_of[q] = t
        load[t] += 1

    touching: list[list[int]] = [[] for _ in range(code.n)]
    for s in code.stabilizers:
        for q in s.qubits:
            touching[q].append(s.id)

    def local_score(q: int) -> int:
        total = 0
        for sid in touching[q]:
            counts = Counter(trap_of[x] for x in code.stabilizers[sid].qubits)
            total += max(counts.values())
        return total

    improved = True
    while improved:
        improved = False
        for q in range(code.n):
            home = trap_of[q]
            base = local_score(q)
            best_gain, best_trap = 0, home
            for cand in range(n_traps):
                if cand == home or load[cand] >= data_room[cand]:
                    continue
                trap_of[q] = cand
                gain = local_score(q) - base
                trap_of[q] = home
                if gain > best_gain:
                    best_gain, best_trap = gain, cand
            if best_trap != home:
                trap_of[q] = best_trap
                load[home] -= 1
                load[best_trap] += 1
                improved = True

    router = router or Router(topology, TimingModel())
    occupancy = list(load)
    ancilla = []
    for j in range(ancilla_budget):
        stab = code.stabilizers[j % code.m] if code.m else None
        want = plurality_trap(stab.qubits, trap_of) if stab else 0
        if occupancy[want] >= topology.usable_capacity(want):
            options = [t for t in range(n_traps) if occupancy[t] < topology.usable_capacity(t)]
            want = min(options, key=lambda t: (router.hop[want][t], t))
        ancilla.append(want)
        occupancy[want] += 1

    data = tuple(frozenset(q for q, tt in trap_of.items() if tt == t) for t in range(n_traps))
    return Partition(data, tuple(ancilla), reserve)


def rebalance(
    mapping: Mapping,
    topology: QccdTopology,
    incoming_trap: int,
    *,
    router: Router | None = None,
    timing: TimingModel | None = None,
    can_evict: Callable[[int], bool] = lambda ion: True,
    pending: Callable[[int], int] = lambda ion: 0,
    arrival: dict[int, int] | None = None,
    pinned: Iterable[int] = (),
) -> list[Op]:
    """Make room for one more ion in ``incoming_trap``.

    Evicts the evictable ion with the fewest pending interactions (ties: most
    recently arrived, then lowest id) to the least-loaded adjacent trap with a
    free slot, or failing that the cheapest-to-reach trap with one. Mutates
    ``mapping`` and returns the shuttle ops; empty if the trap has room.
    """
    if mapping.free(incoming_trap) > 0:
        return []
    router = router or Router(topology, timing or TimingModel())
    arrival = arrival or {}
    pinned = set(pinned)
    candidates = [i for i in mapping.chains[incoming_trap] if i not in pinned and can_evict(i)]
    if not candidates:
        raise SaturationError(f"trap {incoming_trap} is full and holds no evictable ion")
    victim = min(candidates, key=lambda i: (pending(i), -arrival.get(i, 0), i))
    near = [t for t in topology.adjacent_traps(incoming_trap) if mapping.free(t) > 0]
    if near:
        dest = min(near, key=lambda t: (mapping.occupancy(t), t))
    else:
        spare = [t for t in range(topology.n_traps) if t != incoming_trap and mapping.free(t) > 0]
        if not spare:
            raise SaturationError("every trap is at capacity")
        dest = min(spare, key=lambda t: (router.hop[incoming_trap][t], t))
    return shuttle_ops(mapping, router, victim, dest)
