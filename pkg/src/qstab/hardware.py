"""QCCD topologies, the timing model, shuttle routing and the ion mapping."""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from typing import Any, Iterable, Mapping as TMapping, Sequence

LEFT, RIGHT = "L", "R"
GATESWAP, IONSWAP = "gateswap", "ionswap"


class HardwareError(ValueError):
    pass


@dataclass(frozen=True)
class TimingModel:
    """Durations in microseconds for every atomic QCCD action.

    ``gateswap`` is always ``3 * gate2``. ``gate2_by_capacity`` optionally
    replaces ``gate2`` for traps of a given capacity. ``reset`` may be zero;
    every other duration must be strictly positive.
    """

    split: float = 80.0
    move_per_segment: float = 5.0
    merge: float = 80.0
    x_junction: float = 120.0
    y_junction: float = 100.0
    gate2: float = 100.0
    gate1: float = 10.0
    measure: float = 100.0
    ionswap_per_ion: float = 42.0
    cool: float = 100.0
    reset: float = 0.0
    swap_method: str = GATESWAP
    gate2_by_capacity: TMapping[int, float] | None = None

    def __post_init__(self) -> None:
        for name in (
            "split", "move_per_segment", "merge", "x_junction", "y_junction",
            "gate2", "gate1", "measure", "ionswap_per_ion", "cool",
        ):
            if not getattr(self, name) > 0:
                raise HardwareError(f"timing.{name} must be > 0")
        if self.reset < 0:
            raise HardwareError("timing.reset must be >= 0")
        if self.swap_method not in (GATESWAP, IONSWAP):
            raise HardwareError(f"unknown swap method {self.swap_method!r}")
        if self.gate2_by_capacity and any(v <= 0 for v in self.gate2_by_capacity.values()):
            raise HardwareError("gate2_by_capacity entries must be > 0")

    @property
    def gateswap(self) -> float:
        return 3.0 * self.gate2

    def gate2_time(self, capacity: int | None = None) -> float:
        if self.gate2_by_capacity and capacity in self.gate2_by_capacity:
            return float(self.gate2_by_capacity[capacity])
        return self.gate2

    def junction_time(self, kind: str) -> float:
        return {"X": self.x_junction, "Y": self.y_junction}.get(kind, 0.0)

    @classmethod
    def from_dict(cls, data: TMapping[str, Any]) -> "TimingModel":
        data = dict(data)
        if "gateswap" in data:
            raise HardwareError("gateswap is derived as 3*gate2 and cannot be set")
        table = data.pop("gate2_by_capacity", None)
        if table is not None:
            data["gate2_by_capacity"] = {int(k): float(v) for k, v in table.items()}
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise HardwareError(f"unknown timing keys: {sorted(unknown)}")
        return cls(**data)


def intratrap_swap_time(timing: TimingModel, method: str, chain_length: int) -> float:
    """Cost of one intra-trap repositioning swap in a chain of ``chain_length`` ions."""
    if chain_length < 2:
        raise HardwareError("a swap needs at least two ions in the chain")
    if method == GATESWAP:
        return timing.gateswap
    if method == IONSWAP:
        return timing.ionswap_per_ion * chain_length
    raise HardwareError(f"unknown swap method {method!r}")


@dataclass(frozen=True)
class Node:
    id: int
    kind: str  # "trap", "X", "Y" or "plain"


@dataclass(frozen=True)
class QccdTopology:
    """Traps, junctions and the segments joining them.

    Node ids ``0..n_traps-1`` are traps; higher ids are junctions or plain
    waypoints. Every trap has a left and a right chain end; ``ports`` maps
    ``(trap, neighbour)`` to the end (``"L"``/``"R"``) facing that segment.
    Ions pass through intermediate traps without splitting.
    """

    capacities: tuple[int, ...]
    nodes: tuple[Node, ...]
    segments: tuple[tuple[int, int], ...]
    ports: TMapping[tuple[int, int], str]
    name: str = ""
    cooling_ions_occupy: bool = False

    def __post_init__(self) -> None:
        if not self.capacities:
            raise HardwareError("topology needs at least one trap")
        if any(c < 2 for c in self.capacities):
            raise HardwareError("every trap needs capacity >= 2")
        if self.cooling_ions_occupy and any(c < 4 for c in self.capacities):
            raise HardwareError("cooling ions leave no room for a two-qubit gate")
        for i, node in enumerate(self.nodes):
            if node.id != i:
                raise HardwareError("node ids must be contiguous")
            if (node.kind == "trap") != (i < self.n_traps):
                raise HardwareError("traps must occupy the lowest node ids")
        degree = [0] * len(self.nodes)
        for u, v in self.segments:
            if u == v or not (0 <= u < len(self.nodes) and 0 <= v < len(self.nodes)):
                raise HardwareError(f"bad segment {(u, v)}")
            degree[u] += 1
            degree[v] += 1
        expected = {3: "Y", 4: "X"}
        for node in self.nodes[self.n_traps:]:
            if node.kind != expected.get(degree[node.id], "plain"):
                raise HardwareError(
                    f"node {node.id} tagged {node.kind} but has degree {degree[node.id]}"
                )
        for t in range(self.n_traps):
            sides = [self.ports.get((t, v)) for v in self.neighbors[t]]
            if any(s not in (LEFT, RIGHT) for s in sides) or len(sides) != len(set(sides)):
                raise HardwareError(f"trap {t} needs one segment per chain end")
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in self.neighbors[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        if len(seen) != len(self.nodes):
            raise HardwareError("topology is not connected")

    @property
    def n_traps(self) -> int:
        return len(self.capacities)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in self.nodes]
        for u, v in self.segments:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def usable_capacity(self, trap: int) -> int:
        return self.capacities[trap] - (2 if self.cooling_ions_occupy else 0)

    @property
    def total_capacity(self) -> int:
        return sum(self.usable_capacity(t) for t in range(self.n_traps))

    def junctions(self) -> list[Node]:
        return [n for n in self.nodes if n.kind in ("X", "Y")]

    def adjacent_traps(self, trap: int) -> list[int]:
        """Traps reachable from ``trap`` without passing through another trap."""
        found = set()
        seen = {trap}
        stack = [trap]
        while stack:
            u = stack.pop()
            for v in self.neighbors[u]:
                if v in seen:
                    continue
                seen.add(v)
                if v < self.n_traps:
                    found.add(v)
                else:
                    stack.append(v)
        return sorted(found)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "capacities": list(self.capacities),
            "nodes": [n.kind for n in self.nodes],
            "segments": [list(s) for s in self.segments],
        }


def make_linear(traps: int, capacity: int = 5, cooling_ions_occupy: bool = False) -> QccdTopology:
    if traps < 1:
        raise HardwareError("need at least one trap")
    nodes = tuple(Node(i, "trap") for i in range(traps))
    segments = tuple((i, i + 1) for i in range(traps - 1))
    ports = {}
    for u, v in segments:
        ports[(u, v)] = RIGHT
        ports[(v, u)] = LEFT
    return QccdTopology(
        (capacity,) * traps, nodes, segments, ports, f"linear:{traps}x{capacity}", cooling_ions_occupy
    )


def make_grid(rows: int, cols: int, capacity: int = 5, cooling_ions_occupy: bool = False) -> QccdTopology:
    """Rows of traps threaded on a mesh of crossing points.

    Crossing ``(r, k)`` for ``k in 0..cols`` sits between traps ``(r, k-1)``
    and ``(r, k)``; vertical corridors join crossings ``(r, k)`` and
    ``(r+1, k)``. Degree-4 crossings are X junctions, degree-3 are Y
    junctions, degree-2 are plain bends, and dead ends are dropped.
    """
    if rows < 1 or cols < 1:
        raise HardwareError("grid needs rows, cols >= 1")
    n_traps = rows * cols
    crossing_edges: list[tuple[tuple, tuple]] = []
    for r in range(rows):
        for c in range(cols):
            crossing_edges.append((("t", r * cols + c), ("j", r, c)))
            crossing_edges.append((("t", r * cols + c), ("j", r, c + 1)))
    for r in range(rows - 1):
        for k in range(cols + 1):
            crossing_edges.append((("j", r, k), ("j", r + 1, k)))

    degree: dict[tuple, int] = {}
    for a, b in crossing_edges:
        degree[a] = degree.get(a, 0) + 1
        degree[b] = degree.get(b, 0) + 1
    while True:
        dead = {k for k, d in degree.items() if k[0] == "j" and d <= 1}
        if not dead:
            break
        kept = []
        for a, b in crossing_edges:
            if a in dead or b in dead:
                for k in (a, b):
                    if k not in dead:
                        degree[k] -= 1
            else:
                kept.append((a, b))
        crossing_edges = kept
        for k in dead:
            del degree[k]

    ids: dict[tuple, int] = {("t", i): i for i in range(n_traps)}
    nodes = [Node(i, "trap") for i in range(n_traps)]
    for key in sorted(k for k in degree if k[0] == "j"):
        ids[key] = len(nodes)
        nodes.append(Node(len(nodes), {3: "Y", 4: "X"}.get(degree[key], "plain")))
    segments = []
    ports = {}
    for a, b in crossing_edges:
        u, v = ids[a], ids[b]
        segments.append((min(u, v), max(u, v)))
        if a[0] == "t":
            r, c = divmod(a[1], cols)
            ports[(u, v)] = LEFT if b[2] == c else RIGHT
    return QccdTopology(
        (capacity,) * n_traps,
        tuple(nodes),
        tuple(sorted(segments)),
        ports,
        f"grid:{rows}x{cols}x{capacity}",
        cooling_ions_occupy,
    )


@dataclass(frozen=True)
class ShuttlePath:
    """Node sequence of a shuttle; ``segments`` and ``junctions`` derive from it."""

    nodes: tuple[int, ...]
    segments: tuple[tuple[int, int], ...]
    junctions: tuple[tuple[int, str], ...]
    exit_side: str | None
    entry_side: str | None

    @property
    def empty(self) -> bool:
        return len(self.nodes) <= 1

    def __len__(self) -> int:
        return len(self.segments)

    def reversed(self) -> "ShuttlePath":
        return ShuttlePath(
            self.nodes[::-1],
            tuple((v, u) for u, v in reversed(self.segments)),
            self.junctions[::-1],
            self.entry_side,
            self.exit_side,
        )


def _node_cost(topology: QccdTopology, timing: TimingModel, node: int) -> float:
    return timing.junction_time(topology.nodes[node].kind)


def shuttle_path(
    topology: QccdTopology, from_trap: int, to_trap: int, timing: TimingModel | None = None
) -> ShuttlePath:
    """Minimum-time route; ties go to the lexicographically smallest node sequence."""
    timing = timing or TimingModel()
    for t in (from_trap, to_trap):
        if not 0 <= t < topology.n_traps:
            raise HardwareError(f"unknown trap {t}")
    if from_trap == to_trap:
        return ShuttlePath((from_trap,), (), (), None, None)
    best: dict[int, tuple[float, tuple[int, ...]]] = {}
    heap: list[tuple[float, tuple[int, ...]]] = [(0.0, (from_trap,))]
    while heap:
        cost, path = heapq.heappop(heap)
        u = path[-1]
        if u in best:
            continue
        best[u] = (cost, path)
        if u == to_trap:
            break
        for v in topology.neighbors[u]:
            if v in best:
                continue
            step = timing.move_per_segment
            if v != to_trap:
                step += _node_cost(topology, timing, v)
            heapq.heappush(heap, (cost + step, path + (v,)))
    if to_trap not in best:
        raise HardwareError(f"trap {to_trap} unreachable from {from_trap}")
    nodes = best[to_trap][1]
    segments = tuple(zip(nodes, nodes[1:]))
    junctions = tuple(
        (n, topology.nodes[n].kind) for n in nodes[1:-1] if topology.nodes[n].kind in ("X", "Y")
    )
    return ShuttlePath(
        nodes,
        segments,
        junctions,
        topology.ports[(nodes[0], nodes[1])],
        topology.ports[(nodes[-1], nodes[-2])],
    )


def transit_time(timing: TimingModel, path: ShuttlePath) -> float:
    return len(path.segments) * timing.move_per_segment + sum(
        timing.junction_time(kind) for _, kind in path.junctions
    )


def shuttle_time(
    timing: TimingModel,
    path: ShuttlePath,
    intra_source_swaps: int = 0,
    intra_dest_swaps: int = 0,
    source_chain: int = 2,
    dest_chain: int = 2,
) -> float:
    """Split + transit + merge + repositioning swaps at either end (microseconds)."""
    if path.empty:
        return 0.0
    total = timing.split + transit_time(timing, path) + timing.merge
    if intra_source_swaps:
        total += intra_source_swaps * intratrap_swap_time(timing, timing.swap_method, source_chain)
    if intra_dest_swaps:
        total += intra_dest_swaps * intratrap_swap_time(timing, timing.swap_method, dest_chain)
    return total


class Router:
    """All-pairs trap routes for one (topology, timing) pair, computed once."""

    def __init__(self, topology: QccdTopology, timing: TimingModel) -> None:
        self.topology = topology
        self.timing = timing
        n = topology.n_traps
        self.paths = [[shuttle_path(topology, a, b, timing) for b in range(n)] for a in range(n)]
        self.hop = [
            [shuttle_time(timing, self.paths[a][b]) for b in range(n)] for a in range(n)
        ]

    def path(self, a: int, b: int) -> ShuttlePath:
        return self.paths[a][b]

    def swap_time(self, chain_length: int) -> float:
        return intratrap_swap_time(self.timing, self.timing.swap_method, max(chain_length, 2))


class MappingError(RuntimeError):
    pass


@dataclass
class Mapping:
    """Chains of ions per trap, left end first, plus ions currently in transit.

    Ions are integers; the caller decides which are data and which ancilla.
    """

    chains: list[list[int]]
    capacities: tuple[int, ...]
    in_transit: dict[int, int] = field(default_factory=dict)  # ion -> source trap

    @classmethod
    def from_chains(cls, chains: Sequence[Iterable[int]], topology: QccdTopology) -> "Mapping":
        mapping = cls(
            [list(c) for c in chains],
            tuple(topology.usable_capacity(t) for t in range(topology.n_traps)),
        )
        mapping.check()
        return mapping

    def copy(self) -> "Mapping":
        return Mapping([list(c) for c in self.chains], self.capacities, dict(self.in_transit))

    def freeze(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(c) for c in self.chains)

    @property
    def location(self) -> dict[int, int]:
        return {ion: t for t, chain in enumerate(self.chains) for ion in chain}

    def trap_of(self, ion: int) -> int:
        for t, chain in enumerate(self.chains):
            if ion in chain:
                return t
        raise MappingError(f"ion {ion} is not in any trap")

    def occupancy(self, trap: int) -> int:
        return len(self.chains[trap])

    def free(self, trap: int) -> int:
        return self.capacities[trap] - len(self.chains[trap])

    def side_state(self, ion: int) -> str:
        """``"L"``/``"R"`` if at that chain end, ``"B"`` if alone, ``"N"`` if interior."""
        chain = self.chains[self.trap_of(ion)]
        if len(chain) == 1:
            return "B"
        if chain[0] == ion:
            return LEFT
        if chain[-1] == ion:
            return RIGHT
        return "N"

    def end_ion(self, trap: int, side: str) -> int:
        chain = self.chains[trap]
        return chain[0] if side == LEFT else chain[-1]

    def split(self, ion: int, trap: int, side: str) -> None:
        chain = self.chains[trap]
        if not chain or self.end_ion(trap, side) != ion:
            raise MappingError(f"ion {ion} is not at the {side} end of trap {trap}")
        chain.pop(0 if side == LEFT else -1)
        self.in_transit[ion] = trap

    def merge(self, ion: int, trap: int, side: str) -> None:
        if ion not in self.in_transit:
            raise MappingError(f"ion {ion} is not in transit")
        if len(self.chains[trap]) >= self.capacities[trap]:
            raise MappingError(f"trap {trap} is full")
        del self.in_transit[ion]
        if side == LEFT:
            self.chains[trap].insert(0, ion)
        else:
            self.chains[trap].append(ion)

    def swap(self, trap: int, a: int, b: int) -> None:
        chain = self.chains[trap]
        i, j = chain.index(a), chain.index(b)
        chain[i], chain[j] = chain[j], chain[i]

    def check(self) -> None:
        seen: set[int] = set()
        for t, chain in enumerate(self.chains):
            if len(chain) > self.capacities[t]:
                raise MappingError(f"trap {t} over capacity ({len(chain)} > {self.capacities[t]})")
            for ion in chain:
                if ion in seen:
                    raise MappingError(f"ion {ion} appears twice")
                seen.add(ion)
        overlap = seen & set(self.in_transit)
        if overlap:
            raise MappingError(f"ions {sorted(overlap)} both placed and in transit")


def parse_hw_shorthand(text: str) -> QccdTopology:
    """``linear:<traps>x<capacity>`` or ``grid:<rows>x<cols>x<capacity>``."""
    kind, _, dims = text.partition(":")
    try:
        parts = [int(x) for x in dims.split("x")]
    except ValueError:
        raise HardwareError(f"bad hardware shorthand {text!r}") from None
    if kind == "linear" and len(parts) == 2:
        return make_linear(*parts)
    if kind == "grid" and len(parts) == 3:
        return make_grid(*parts)
    raise HardwareError(
        f"bad hardware shorthand {text!r}; use linear:<traps>x<cap> or grid:<rows>x<cols>x<cap>"
    )


def load_hw_config(source: str | Path | TMapping[str, Any]) -> tuple[QccdTopology, TimingModel]:
    """Read a JSON hardware config (path or already-parsed dict)."""
    if isinstance(source, (str, Path)):
        data = json.loads(Path(source).read_text())
    else:
        data = dict(source)
    timing = TimingModel.from_dict(data.get("timing", {}))
    capacity = int(data.get("capacity", 5))
    cooling = bool(data.get("cooling_ions_occupy", False))
    kind = data.get("topology")
    if kind == "linear":
        topo = make_linear(int(data["traps"]), capacity, cooling)
    elif kind == "grid":
        topo = make_grid(int(data["rows"]), int(data["cols"]), capacity, cooling)
    else:
        raise HardwareError(f"unknown topology {kind!r}; expected 'linear' or 'grid'")
    return topo, timing


def grid_for(traps: int, capacity: int = 5) -> QccdTopology:
    """Near-square grid with at least ``traps`` traps."""
    rows = max(1, math.isqrt(traps))
    cols = math.ceil(traps / rows)
    return make_grid(rows, cols, capacity)


def with_timing(timing: TimingModel, **changes: Any) -> TimingModel:
    return replace(timing, **changes)
