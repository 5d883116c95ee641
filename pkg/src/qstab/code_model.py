"""Stabilizer codes: generators, a small text format, and the Tanner graph."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence


class Pauli(enum.Enum):
    X = "X"
    Y = "Y"
    Z = "Z"

    def anticommutes(self, other: "Pauli") -> bool:
        return self is not other


class CodeError(ValueError):
    """Raised for malformed or inconsistent stabilizer codes."""


class CodeSyntaxError(CodeError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class CommutationError(CodeError):
    def __init__(self, first: int, second: int) -> None:
        super().__init__(f"stabilizers {first} and {second} anticommute")
        self.pair = (first, second)


@dataclass(frozen=True)
class Stabilizer:
    id: int
    support: tuple[tuple[int, Pauli], ...]

    @property
    def weight(self) -> int:
        return len(self.support)

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.support)

    def pauli_on(self, qubit: int) -> Pauli | None:
        for q, p in self.support:
            if q == qubit:
                return p
        return None

    @property
    def is_z_type(self) -> bool:
        return all(p is Pauli.Z for _, p in self.support)

    def commutes_with(self, other: "Stabilizer") -> bool:
        theirs = dict(other.support)
        clashes = sum(
            1 for q, p in self.support if q in theirs and p.anticommutes(theirs[q])
        )
        return clashes % 2 == 0

    def to_text(self) -> str:
        return " ".join(f"{p.value}{q}" for q, p in self.support)


@dataclass(frozen=True)
class StabilizerCode:
    """``n`` data qubits checked by an ordered list of commuting stabilizers.

    Construction validates qubit ranges and pairwise commutation. An empty
    stabilizer list is accepted here (the ``d=1`` surface code has none);
    :func:`parse_code` and the compilers require at least one.
    """

    n: int
    stabilizers: tuple[Stabilizer, ...]
    label: str = ""

    def __post_init__(self) -> None:
        if self.n < 1:
            raise CodeError("a code needs at least one data qubit")
        for i, stab in enumerate(self.stabilizers):
            if stab.id != i:
                raise CodeError(f"stabilizer ids must be 0..m-1, got {stab.id} at {i}")
            if stab.weight < 1:
                raise CodeError(f"stabilizer {i} has empty support")
            seen = set()
            for q, _ in stab.support:
                if not 0 <= q < self.n:
                    raise CodeError(f"stabilizer {i}: qubit {q} outside [0, {self.n})")
                if q in seen:
                    raise CodeError(f"stabilizer {i}: qubit {q} repeated")
                seen.add(q)
        for a, b in combinations(self.stabilizers, 2):
            if not a.commutes_with(b):
                raise CommutationError(a.id, b.id)

    @property
    def m(self) -> int:
        return len(self.stabilizers)

    @property
    def max_weight(self) -> int:
        return max((s.weight for s in self.stabilizers), default=0)

    def to_text(self) -> str:
        lines = []
        if self.label:
            lines.append(f"# {self.label}")
        lines.append(f"n={self.n}")
        lines.extend(s.to_text() for s in self.stabilizers)
        return "\n".join(lines) + "\n"


def make_code(
    n: int, supports: Iterable[Sequence[tuple[int, Pauli | str]]], label: str = ""
) -> StabilizerCode:
    stabs = []
    for i, support in enumerate(supports):
        stabs.append(
            Stabilizer(i, tuple((int(q), Pauli(p) if isinstance(p, str) else p) for q, p in support))
        )
    return StabilizerCode(n, tuple(stabs), label)


def build_surface_code(d: int) -> StabilizerCode:
    """Rotated surface code with ``d*d`` data qubits on a square patch.

    Data qubit ``(r, c)`` has index ``r*d + c``. Plaquette ``(i, j)`` touches
    the data at rows ``i-1, i`` and columns ``j-1, j``; it is X-type when
    ``i + j`` is even. Top/bottom boundary plaquettes keep only X-type,
    left/right keep only Z-type.
    """
    if not isinstance(d, int) or d < 1 or d % 2 == 0:
        raise CodeError(f"surface code distance must be a positive odd integer, got {d!r}")
    supports = []
    for i in range(d + 1):
        for j in range(d + 1):
            pauli = Pauli.X if (i + j) % 2 == 0 else Pauli.Z
            on_row_edge = i in (0, d)
            on_col_edge = j in (0, d)
            if on_row_edge and on_col_edge:
                continue
            if on_row_edge and pauli is not Pauli.X:
                continue
            if on_col_edge and pauli is not Pauli.Z:
                continue
            qubits = [
                r * d + c
                for r in (i - 1, i)
                for c in (j - 1, j)
                if 0 <= r < d and 0 <= c < d
            ]
            supports.append([(q, pauli) for q in qubits])
    return make_code(d * d, supports, f"surface:{d}")


def build_color_code(d: int) -> StabilizerCode:
    """Triangular 6.6.6 color code; ``d=3`` gives the Steane layout.

    Built on a triangular lattice ``{(i, j): i, j >= 0, i + j <= L}`` with
    ``L = 3(d-1)/2``. Points with ``(i - j) % 3 == 2`` are face centres and the
    rest are data qubits; each face yields an X and a Z stabilizer on the
    data points adjacent to it.
    """
    if not isinstance(d, int) or d < 3 or d % 2 == 0:
        raise CodeError(f"color code distance must be an odd integer >= 3, got {d!r}")
    size = 3 * (d - 1) // 2
    points = [(i, j) for i in range(size + 1) for j in range(size + 1 - i)]
    faces = [p for p in points if (p[0] - p[1]) % 3 == 2]
    data = [p for p in points if (p[0] - p[1]) % 3 != 2]
    index = {p: k for k, p in enumerate(data)}
    steps = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1))
    supports = []
    for fi, fj in faces:
        qubits = sorted(index[(fi + di, fj + dj)] for di, dj in steps if (fi + di, fj + dj) in index)
        supports.append([(q, Pauli.X) for q in qubits])
        supports.append([(q, Pauli.Z) for q in qubits])
    return make_code(len(data), supports, f"color:{d}")


def build_repetition_code(n: int) -> StabilizerCode:
    if not isinstance(n, int) or n < 2:
        raise CodeError(f"repetition code needs n >= 2, got {n!r}")
    return make_code(n, ([(i, Pauli.Z), (i + 1, Pauli.Z)] for i in range(n - 1)), f"repetition:{n}")


GENERATORS = {
    "surface": build_surface_code,
    "color": build_color_code,
    "repetition": build_repetition_code,
}


def generate(name: str) -> StabilizerCode:
    """Build a code from a ``family:size`` shorthand such as ``surface:3``."""
    family, _, size = name.partition(":")
    if family not in GENERATORS or not size.isdigit():
        raise CodeError(
            f"unknown code shorthand {name!r}; expected one of "
            + ", ".join(f"{k}:<int>" for k in GENERATORS)
        )
    return GENERATORS[family](int(size))


_TOKEN = re.compile(r"([XYZ])(\d+)$")
_HEADER = re.compile(r"n\s*=\s*(\d+)$")


def parse_code(text: str, label: str = "") -> StabilizerCode:
    """Parse the text format: an ``n=<int>`` header, then one stabilizer per line.

    Tokens are ``<Pauli><index>`` separated by whitespace, ``#`` starts a
    comment. Raises :class:`CodeSyntaxError` with a 1-based line/column,
    :class:`CommutationError` naming the offending pair, or
    :class:`CodeError` for range problems.
    """
    n = None
    supports: list[list[tuple[int, Pauli]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        if n is None:
            match = _HEADER.match(body.strip())
            if not match:
                col = len(body) - len(body.lstrip()) + 1
                raise CodeSyntaxError("expected header 'n=<int>'", lineno, col)
            n = int(match.group(1))
            continue
        support = []
        for tok in re.finditer(r"\S+", body):
            match = _TOKEN.match(tok.group())
            if not match:
                raise CodeSyntaxError(
                    f"bad token {tok.group()!r}, expected e.g. 'X3'", lineno, tok.start() + 1
                )
            q = int(match.group(2))
            if q >= n:
                raise CodeError(f"line {lineno}: qubit {q} outside [0, {n})")
            support.append((q, Pauli(match.group(1))))
        supports.append(support)
    if n is None:
        raise CodeSyntaxError("missing header 'n=<int>'", 1, 1)
    if not supports:
        raise CodeError("code has no stabilizers")
    return make_code(n, supports, label)


@dataclass(frozen=True)
class TannerGraph:
    """Bipartite check/data adjacency; checks are ``0..m-1``, data ``0..n-1``."""

    n_checks: int
    n_data: int
    edges: tuple[tuple[int, int], ...]
    check_adj: tuple[tuple[int, ...], ...] = field(repr=False)
    data_adj: tuple[tuple[int, ...], ...] = field(repr=False)

    def check_degree(self, check: int) -> int:
        return len(self.check_adj[check])

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from((("c", i) for i in range(self.n_checks)), bipartite=0)
        g.add_nodes_from((("d", j) for j in range(self.n_data)), bipartite=1)
        g.add_edges_from((("c", i), ("d", j)) for i, j in self.edges)
        return g


def tanner_graph(code: StabilizerCode) -> TannerGraph:
    edges = tuple((s.id, q) for s in code.stabilizers for q in s.qubits)
    check_adj = tuple(s.qubits for s in code.stabilizers)
    data_adj: list[list[int]] = [[] for _ in range(code.n)]
    for i, j in edges:
        data_adj[j].append(i)
    return TannerGraph(code.m, code.n, edges, check_adj, tuple(map(tuple, data_adj)))
