"""Independent reference computations used to freeze expected values.

Nothing here imports the package's algorithms; only plain data is shared.
"""

from __future__ import annotations

import itertools

import networkx as nx
import numpy as np
from scipy.integrate import solve_ivp

# -- stabilizer algebra over GF(2) ------------------------------------------

def symplectic(n: int, support: list[tuple[int, str]]) -> np.ndarray:
    v = np.zeros(2 * n, dtype=np.uint8)
    for q, p in support:
        if p in ("X", "Y"):
            v[q] = 1
        if p in ("Z", "Y"):
            v[n + q] = 1
    return v


def commute(n: int, a, b) -> bool:
    va, vb = symplectic(n, a), symplectic(n, b)
    return int(va[:n] @ vb[n:] + va[n:] @ vb[:n]) % 2 == 0


def gf2_rank(rows: np.ndarray) -> int:
    m = rows.copy() % 2
    rank = 0
    for col in range(m.shape[1]):
        pivot = next((r for r in range(rank, m.shape[0]) if m[r, col]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(m.shape[0]):
            if r != rank and m[r, col]:
                m[r] ^= m[rank]
        rank += 1
    return rank


def logical_qubits(n: int, supports) -> int:
    return n - gf2_rank(np.array([symplectic(n, s) for s in supports]))


# -- routing -----------------------------------------------------------------

def brute_force_route(n_traps, kinds, segments, a, b, move=5.0, junction={"X": 120.0, "Y": 100.0}):
    """Cheapest simple path by enumeration; returns (cost, nodes) with lexicographic tie-break."""
    g = nx.Graph()
    g.add_edges_from(segments)
    best = None
    for path in nx.all_simple_paths(g, a, b):
        cost = move * (len(path) - 1) + sum(junction.get(kinds[v], 0.0) for v in path[1:-1])
        key = (cost, tuple(path))
        if best is None or key < best:
            best = key
    return best


# -- scheduling ---------------------------------------------------------------

def dag_makespan(durations, ion_sets, resource_sets, round_ids) -> float:
    """Longest path through the chain DAG: consecutive users of an ion or
    resource are ordered, and rounds are sequential blocks."""
    total = 0.0
    for r in sorted(set(round_ids)):
        idx = [k for k, rr in enumerate(round_ids) if rr == r]
        g = nx.DiGraph()
        last: dict = {}
        for k in idx:
            g.add_node(k)
            for key in [("i", i) for i in ion_sets[k]] + [("r", x) for x in resource_sets[k]]:
                if key in last:
                    g.add_edge(last[key], k)
                last[key] = k
        finish: dict[int, float] = {}
        for k in nx.topological_sort(g):
            start = max((finish[p] for p in g.predecessors(k)), default=0.0)
            finish[k] = start + durations[k]
        total += max(finish.values(), default=0.0)
    return total


# -- noise ---------------------------------------------------------------------

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _lindblad(T1: float, T2: float):
    g1 = 1.0 / T1
    gphi = 1.0 / T2 - 1.0 / (2.0 * T1)
    lower = np.sqrt(g1) * np.array([[0, 1], [0, 0]], dtype=complex)
    deph = np.sqrt(gphi / 2.0) * _PAULI["Z"]
    ops = [lower, deph]

    def rhs(rho):
        out = np.zeros((2, 2), dtype=complex)
        for L in ops:
            Ld = L.conj().T
            out += L @ rho @ Ld - 0.5 * (Ld @ L @ rho + rho @ Ld @ L)
        return out

    return rhs


def twirled_channel_numeric(t: float, T1: float, T2: float) -> tuple[float, float, float]:
    """Integrate the Lindblad equation for each Pauli input and twirl.

    The ODE is solved for the deviation ``E(P) - P`` so that tiny error
    probabilities keep full relative precision.
    """
    rhs = _lindblad(T1, T2)
    eps = {}
    for name in ("X", "Y", "Z"):
        P = _PAULI[name]

        def f(_, y, P=P):
            delta = (y[:4] + 1j * y[4:]).reshape(2, 2)
            d = rhs(P + delta).reshape(-1)
            return np.concatenate([d.real, d.imag])

        if t == 0:
            eps[name] = 0.0
            continue
        sol = solve_ivp(f, (0.0, t), np.zeros(8), method="DOP853", rtol=1e-12, atol=1e-22)
        delta = (sol.y[:4, -1] + 1j * sol.y[4:, -1]).reshape(2, 2)
        eps[name] = float(np.real(np.trace(P @ delta)) / 2.0)  # lambda - 1
    ex, ey, ez = eps["X"], eps["Y"], eps["Z"]
    px = (ex - ey - ez) / 4.0
    py = (-ex + ey - ez) / 4.0
    pz = (-ex - ey + ez) / 4.0
    return px, py, pz


def noise_grid() -> list[tuple[float, float, float]]:
    """20 (t, T1, T2) points: short and long idles, T2 below, equal to and at 2*T1."""
    ts = [1e-4, 3e-3, 0.05, 2.0, 40.0]
    pairs = [(10.0, 10.0), (100.0, 100.0), (30.0, 12.0), (20.0, 40.0)]
    return [(t, T1, T2) for (T1, T2), t in itertools.product(pairs, ts)]


def brute_force_partition_score(supports: list[list[int]], n: int, traps: int, room: int) -> int:
    """Best plurality-co-trapped edge count over every data assignment."""
    best = 0
    for assign in itertools.product(range(traps), repeat=n):
        if any(assign.count(t) > room for t in range(traps)):
            continue
        score = 0
        for s in supports:
            counts: dict[int, int] = {}
            for q in s:
                counts[assign[q]] = counts.get(assign[q], 0) + 1
            score += max(counts.values())
        best = max(best, score)
    return best
