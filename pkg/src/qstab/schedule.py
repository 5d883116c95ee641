"""Atomic QCCD operations, schedules, and their line-oriented text format."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from typing import Iterator, Sequence

from .hardware import LEFT, RIGHT, Mapping, Router


class OpKind(str, enum.Enum):
    SPLIT = "split"
    MOVE = "move"
    MERGE = "merge"
    SWAP = "swap"
    GATE1 = "gate1"
    GATE2 = "gate2"
    MEASURE = "measure"
    RESET = "reset"
    COOL = "cool"


SHUTTLE_KINDS = frozenset({OpKind.SPLIT, OpKind.MOVE, OpKind.MERGE})
LOCAL_KINDS = frozenset({OpKind.GATE1, OpKind.MEASURE, OpKind.RESET})


@dataclass(frozen=True)
class Op:
    """One atomic action.

    ``resource`` is only used by MOVE: ``("seg", u, v)`` travels the segment
    from node ``u`` to ``v``; ``("jct", j)`` crosses junction ``j``.
    """

    kind: OpKind
    ions: tuple[int, ...]
    trap: int | None = None
    side: str | None = None
    resource: tuple | None = None
    stab: int | None = None
    pauli: str | None = None

    def inverse(self) -> "Op":
        if self.kind is OpKind.SPLIT:
            return replace(self, kind=OpKind.MERGE)
        if self.kind is OpKind.MERGE:
            return replace(self, kind=OpKind.SPLIT)
        if self.kind is OpKind.MOVE and self.resource[0] == "seg":
            _, u, v = self.resource
            return replace(self, resource=("seg", v, u))
        return self


@dataclass
class Schedule:
    """Rounds of atomic ops plus the initial mapping they start from.

    Ions ``0..n_data-1`` are data qubits, the next ``n_ancilla`` are ancilla.
    """

    n_data: int
    n_ancilla: int
    initial: tuple[tuple[int, ...], ...]
    rounds: list[list[Op]] = field(default_factory=list)
    compiler: str = ""
    code_label: str = ""

    @property
    def ops(self) -> Iterator[Op]:
        for r in self.rounds:
            yield from r

    def __len__(self) -> int:
        return sum(len(r) for r in self.rounds)

    def is_data(self, ion: int) -> bool:
        return ion < self.n_data

    def ion_name(self, ion: int) -> str:
        return f"d{ion}" if ion < self.n_data else f"a{ion - self.n_data}"

    def count(self, kind: OpKind) -> int:
        return sum(1 for op in self.ops if op.kind is kind)

    def dumps(self, times: Sequence[float] | None = None) -> str:
        lines = [
            "# qstab schedule v1",
            f"compiler {self.compiler or '-'}",
            f"code {self.code_label or '-'}",
            f"ions data={self.n_data} ancilla={self.n_ancilla}",
        ]
        for t, chain in enumerate(self.initial):
            lines.append(" ".join(["init", str(t), *(self.ion_name(i) for i in chain)]))
        k = 0
        for r, ops in enumerate(self.rounds, start=1):
            lines.append(f"round {r}")
            for op in ops:
                prefix = f"{times[k]:.3f} " if times is not None else ""
                lines.append(prefix + format_op(op, self.ion_name))
                k += 1
        return "\n".join(lines) + "\n"


def format_op(op: Op, name) -> str:
    ions = ",".join(name(i) for i in op.ions)
    if op.kind is OpKind.MOVE:
        if op.resource[0] == "seg":
            where = f"seg:{op.resource[1]}-{op.resource[2]}"
        else:
            where = f"jct:{op.resource[1]}"
    elif op.kind in (OpKind.SPLIT, OpKind.MERGE):
        where = f"trap:{op.trap}:{op.side}"
    else:
        where = f"trap:{op.trap}"
    parts = [op.kind.value, ions, where]
    if op.stab is not None:
        parts.append(f"s{op.stab}")
    if op.pauli is not None:
        parts.append(op.pauli)
    return " ".join(parts)


class ScheduleFormatError(ValueError):
    pass


_NUM = re.compile(r"^-?\d+(\.\d*)?$")


def loads(text: str) -> Schedule:
    """Parse :meth:`Schedule.dumps` output; a leading timestamp per op line is ignored."""
    n_data = n_anc = None
    initial: dict[int, tuple[int, ...]] = {}
    rounds: list[list[Op]] = []
    compiler = label = ""

    def ion(tok: str, lineno: int) -> int:
        if n_data is None:
            raise ScheduleFormatError(f"line {lineno}: 'ions' header must come first")
        if tok[:1] == "d" and tok[1:].isdigit():
            return int(tok[1:])
        if tok[:1] == "a" and tok[1:].isdigit():
            return n_data + int(tok[1:])
        raise ScheduleFormatError(f"line {lineno}: bad ion {tok!r}")

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        head = line[0]
        if head == "compiler":
            compiler = "" if line[1] == "-" else line[1]
        elif head == "code":
            label = "" if line[1] == "-" else line[1]
        elif head == "ions":
            fields = dict(item.split("=") for item in line[1:])
            n_data, n_anc = int(fields["data"]), int(fields["ancilla"])
        elif head == "init":
            initial[int(line[1])] = tuple(ion(t, lineno) for t in line[2:])
        elif head == "round":
            rounds.append([])
        else:
            if _NUM.match(head):
                line = line[1:]
            if not rounds:
                raise ScheduleFormatError(f"line {lineno}: op before first 'round'")
            rounds[-1].append(_parse_op(line, lineno, ion))
    if n_data is None:
        raise ScheduleFormatError("missing 'ions' header")
    chains = tuple(initial.get(t, ()) for t in range(max(initial, default=-1) + 1))
    return Schedule(n_data, n_anc, chains, rounds, compiler, label)


def _parse_op(tokens: list[str], lineno: int, ion) -> Op:
    try:
        kind = OpKind(tokens[0])
        ions = tuple(ion(t, lineno) for t in tokens[1].split(","))
        where = tokens[2]
    except (IndexError, ValueError) as exc:
        raise ScheduleFormatError(f"line {lineno}: {exc}") from None
    stab = pauli = None
    for extra in tokens[3:]:
        if extra[0] == "s" and extra[1:].isdigit():
            stab = int(extra[1:])
        else:
            pauli = extra
    if where.startswith("seg:"):
        u, v = where[4:].split("-")
        return Op(kind, ions, resource=("seg", int(u), int(v)), stab=stab, pauli=pauli)
    if where.startswith("jct:"):
        return Op(kind, ions, resource=("jct", int(where[4:])), stab=stab, pauli=pauli)
    if where.startswith("trap:"):
        bits = where.split(":")
        side = bits[2] if len(bits) > 2 else None
        return Op(kind, ions, trap=int(bits[1]), side=side, stab=stab, pauli=pauli)
    raise ScheduleFormatError(f"line {lineno}: bad resource {where!r}")


def shuttle_ops(mapping: Mapping, router: Router, ion: int, dest: int) -> list[Op]:
    """Lower one shuttle to atomic ops, applying it to ``mapping`` as it goes.

    A swap with the chain-end ion is inserted first when ``ion`` is not at the
    end facing the route. The caller must already have made room in ``dest``.
    """
    src = mapping.trap_of(ion)
    path = router.path(src, dest)
    if path.empty:
        return []
    ops: list[Op] = []
    state = mapping.side_state(ion)
    if state not in (path.exit_side, "B"):
        other = mapping.end_ion(src, path.exit_side)
        mapping.swap(src, ion, other)
        ops.append(Op(OpKind.SWAP, (ion, other), trap=src))
    mapping.split(ion, src, path.exit_side)
    ops.append(Op(OpKind.SPLIT, (ion,), trap=src, side=path.exit_side))
    kinds = router.topology.nodes
    for u, v in path.segments:
        ops.append(Op(OpKind.MOVE, (ion,), resource=("seg", u, v)))
        if v != dest and kinds[v].kind in ("X", "Y"):
            ops.append(Op(OpKind.MOVE, (ion,), resource=("jct", v)))
    mapping.merge(ion, dest, path.entry_side)
    ops.append(Op(OpKind.MERGE, (ion,), trap=dest, side=path.entry_side))
    return ops


def exit_needs_swap(mapping: Mapping, ion: int, side: str) -> bool:
    return mapping.side_state(ion) not in (side, "B")


__all__ = [
    "LEFT",
    "RIGHT",
    "Op",
    "OpKind",
    "Schedule",
    "ScheduleFormatError",
    "loads",
    "shuttle_ops",
]
