"""Syndrome extraction compilers: baseline, move-ancilla-only and Moveless."""

from .circuit import GateStep, circuit_time, stabilizer_circuit, sweep_budgets
from .generic import compile_baseline, compile_mao
from .lowering import CompileError
from .moveless import MovementScore, compile_moveless, movement_score
from .reverse import reverse_round

COMPILERS = {
    "baseline": compile_baseline,
    "mao": compile_mao,
    "moveless": compile_moveless,
}


def compile_code(name: str, code, topology, timing=None, ancilla_budget: int = 1, rounds: int = 1, **kw):
    try:
        fn = COMPILERS[name]
    except KeyError:
        raise CompileError(f"unknown compiler {name!r}; choose from {', '.join(COMPILERS)}") from None
    return fn(code, topology, timing, ancilla_budget, rounds, **kw)


__all__ = [
    "COMPILERS",
    "CompileError",
    "GateStep",
    "MovementScore",
    "circuit_time",
    "compile_baseline",
    "compile_code",
    "compile_mao",
    "compile_moveless",
    "movement_score",
    "reverse_round",
    "stabilizer_circuit",
    "sweep_budgets",
]
