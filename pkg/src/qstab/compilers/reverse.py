"""Round reversal: replay a round's movement backwards to restore the mapping."""

from __future__ import annotations

from dataclasses import replace

from ..schedule import LOCAL_KINDS, Op, OpKind


def reverse_round(ops: list[Op]) -> list[Op]:
    """Invert a compiled round.

    Shuttles and swaps are inverted and replayed in reverse order, so the
    round ends on the mapping the forward round started from. Two-qubit
    gates run in reverse order too. Each stabilizer's local ops keep their
    role: those that preceded its first gate are emitted before its new first
    gate, the rest after its new last gate, in the trap where that gate runs.
    """
    first_gate: dict[int, int] = {}
    for k, op in enumerate(ops):
        if op.kind is OpKind.GATE2 and op.stab not in first_gate:
            first_gate[op.stab] = k
    before: dict[int, list[Op]] = {}
    after: dict[int, list[Op]] = {}
    for k, op in enumerate(ops):
        if op.kind in LOCAL_KINDS:
            if op.stab not in first_gate:
                raise ValueError(f"local op {op} has no stabilizer gates to attach to")
            bucket = before if k < first_gate[op.stab] else after
            bucket.setdefault(op.stab, []).append(op)

    body = [op.inverse() for op in reversed(ops) if op.kind not in LOCAL_KINDS and op.kind is not OpKind.COOL]
    last_gate: dict[int, int] = {}
    seen: set[int] = set()
    for k, op in enumerate(body):
        if op.kind is OpKind.GATE2:
            last_gate[op.stab] = k
    out: list[Op] = []
    for k, op in enumerate(body):
        if op.kind is OpKind.GATE2 and op.stab not in seen:
            seen.add(op.stab)
            out.extend(replace(x, trap=op.trap) for x in before.get(op.stab, ()))
        out.append(op)
        if op.kind is OpKind.GATE2 and last_gate[op.stab] == k:
            out.extend(replace(x, trap=op.trap) for x in after.get(op.stab, ()))
    return out
