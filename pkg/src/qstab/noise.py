"""Round latency to error-channel parameters via the Pauli twirling approximation."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Any

from .simulator import LatencyReport

T_MIN_S, T_MAX_S = 10.0, 100.0


class NoiseError(ValueError):
    pass


def coherence_from_p(p: float) -> tuple[float, float]:
    """``T1 = T2 = 10**(-log10(p) - 2)`` seconds, clamped to [10, 100]."""
    if not 0.0 < p < 1.0:
        raise NoiseError(f"physical error rate must lie in (0, 1), got {p}")
    t = 10.0 ** (-math.log10(p) - 2.0)
    t = min(max(t, T_MIN_S), T_MAX_S)
    return t, t


def pta_channel(t: float, T1: float, T2: float) -> tuple[float, float, float]:
    """Pauli-twirled amplitude damping plus dephasing after idling for ``t``."""
    if t < 0:
        raise NoiseError("idle time must be >= 0")
    if T1 <= 0 or T2 <= 0:
        raise NoiseError("T1 and T2 must be > 0")
    if T2 > 2 * T1:
        raise NoiseError(f"T2={T2} exceeds 2*T1={2 * T1}")
    damp = -math.expm1(-t / T1)  # 1 - exp(-t/T1) without cancellation
    deph = -math.expm1(-t / T2)
    px = py = damp / 4.0
    pz = deph / 2.0 - damp / 4.0
    return px, py, max(pz, 0.0)


@dataclass(frozen=True)
class ErrorBudget:
    p: float
    rate_1q: float
    rate_2q: float
    rate_meas: float
    px: float
    py: float
    pz: float
    t_round_s: float
    T1_s: float
    T2_s: float

    def to_dict(self) -> dict[str, float]:
        return asdict(self)


def error_budget(
    report: LatencyReport | float,
    p: float,
    T1: float | None = None,
    T2: float | None = None,
) -> list[ErrorBudget]:
    """One budget per distinct round latency, in first-seen order.

    ``report`` may also be a bare round latency in microseconds. ``T1`` and
    ``T2`` override the values fitted from ``p``.
    """
    fit1, fit2 = coherence_from_p(p)
    T1 = fit1 if T1 is None else T1
    T2 = fit2 if T2 is None else T2
    rounds = [float(report)] if isinstance(report, (int, float)) else list(report.rounds_us)
    if not rounds:
        rounds = [0.0]
    out: list[ErrorBudget] = []
    seen: set[float] = set()
    for us in rounds:
        if us in seen:
            continue
        seen.add(us)
        t = us * 1e-6
        px, py, pz = pta_channel(t, T1, T2)
        out.append(ErrorBudget(p, 0.1 * p, p, p, px, py, pz, t, T1, T2))
    return out


def dumps(budgets: list[ErrorBudget]) -> str:
    body: Any = budgets[0].to_dict() if len(budgets) == 1 else [b.to_dict() for b in budgets]
    return json.dumps(body, indent=2) + "\n"
