"""Per-stabilizer syndrome extraction circuits."""

from __future__ import annotations

from dataclasses import dataclass

from ..code_model import Stabilizer
from ..hardware import TimingModel


@dataclass(frozen=True)
class GateStep:
    """One logical step: ``gate1`` (basis change on the ancilla), ``gate2``,
    ``measure`` or ``reset``. ``gate2`` couples ``data`` with ``ancilla``."""

    kind: str
    stab: int
    ancilla: int
    data: int | None = None
    pauli: str | None = None

    def __post_init__(self) -> None:
        if (self.kind == "gate2") != (self.data is not None):
            raise ValueError("only gate2 steps carry a data qubit")


def stabilizer_circuit(
    stab: Stabilizer, ancilla: int, order: list[int] | None = None
) -> list[GateStep]:
    """Extraction circuit for one check read out on ``ancilla``.

    All-Z checks are ``w`` controlled gates, measure and reset. Anything else
    is prepared and read out in the X basis, adding a ``gate1`` on each side.
    ``order`` optionally permutes the data qubits.
    """
    qubits = list(stab.qubits) if order is None else list(order)
    if sorted(qubits) != sorted(stab.qubits):
        raise ValueError(f"order does not match the support of stabilizer {stab.id}")
    basis = not stab.is_z_type
    steps = []
    if basis:
        steps.append(GateStep("gate1", stab.id, ancilla, pauli="H"))
    for q in qubits:
        steps.append(GateStep("gate2", stab.id, ancilla, q, stab.pauli_on(q).value))
    if basis:
        steps.append(GateStep("gate1", stab.id, ancilla, pauli="H"))
    steps.append(GateStep("measure", stab.id, ancilla))
    steps.append(GateStep("reset", stab.id, ancilla))
    return steps


def circuit_time(steps: list[GateStep], timing: TimingModel) -> float:
    """Serial duration of a circuit when every step runs back to back."""
    cost = {"gate1": timing.gate1, "gate2": timing.gate2, "measure": timing.measure, "reset": timing.reset}
    return sum(cost[s.kind] for s in steps)


def sweep_budgets(m: int) -> list[int]:
    """``{1, 20%, 40%, 60%, 80%, 100%}`` of ``m``, rounded up and deduplicated."""
    if m < 1:
        raise ValueError("need at least one stabilizer")
    return sorted({1, *(-(-k * m // 5) for k in range(1, 5)), m})
