"""Time the compiled and pure-Python kernels on realistic inputs.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from qstab import kernels
from qstab.code_model import generate
from qstab.compilers import compile_code
from qstab.compilers.moveless import _Tables
from qstab.hardware import Mapping, Router, TimingModel, make_linear
from qstab.simulator import _expand, _resource_keys


def schedule_inputs(name: str, budget: int):
    code = generate(name)
    topo = make_linear(code.m)
    timing = TimingModel()
    sched = compile_code("baseline", code, topo, timing, budget, 4)
    ops, durations, rounds, _ = _expand(sched, topo, timing)
    res: dict = {}
    ion_ptr, ion_idx, res_ptr, res_idx = [0], [], [0], []
    for op in ops:
        ion_idx.extend(op.ions)
        ion_ptr.append(len(ion_idx))
        for key in _resource_keys(op):
            res_idx.append(res.setdefault(key, len(res)))
        res_ptr.append(len(res_idx))
    arr = lambda x, t=np.int64: np.asarray(x, dtype=t)
    return (arr(durations, np.float64), arr(ion_ptr), arr(ion_idx), arr(res_ptr), arr(res_idx),
            arr(rounds), code.n + budget, len(res)), len(ops)


def score_inputs(name: str):
    code = generate(name)
    topo = make_linear(code.m)
    router = Router(topo, TimingModel())
    tables = _Tables(router)
    from qstab.placement import partition_data

    mapping: Mapping = partition_data(code, topo, code.m, router=router).mapping(topo, code.n)
    where = mapping.location
    traps = [sorted({where[q] for q in s.qubits}) for s in code.stabilizers]
    ptr = np.cumsum([0] + [len(t) for t in traps]).astype(np.int64)
    flat = np.array([t for ts in traps for t in ts], dtype=np.int64)
    ions = [code.n + a for a in range(code.m)]
    occ = np.array([len(c) for c in mapping.chains], dtype=np.int64)
    anc_trap = np.array([where[i] for i in ions], dtype=np.int64)
    anc_state = np.array([kernels.SIDE_CODES[mapping.side_state(i)] for i in ions], dtype=np.int64)
    return (tables.hop, tables.exit, tables.entry, occ, anc_trap, anc_state, ptr, flat,
            tables.swap_const, tables.swap_per_ion), code.m


def bench(label: str, fn_py, fn_c, args, repeat: int) -> None:
    t_py = min(timeit.repeat(lambda: fn_py(*args), number=1, repeat=repeat))
    if fn_c is None:
        print(f"{label:44s} python {t_py * 1e3:9.2f} ms   compiled  n/a")
        return
    t_c = min(timeit.repeat(lambda: fn_c(*args), number=1, repeat=repeat))
    print(f"{label:44s} python {t_py * 1e3:9.2f} ms   compiled {t_c * 1e3:8.3f} ms   x{t_py / t_c:6.1f}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    py, c = kernels.python, kernels.compiled
    print(f"active backend: {kernels.BACKEND}")
    for name, budget in [("surface:5", 5), ("surface:7", 48), ("color:5", 18)]:
        inputs, n_ops = schedule_inputs(name, budget)
        bench(f"list_schedule {name} b={budget} ({n_ops} ops)",
              py.list_schedule, c and c.list_schedule, inputs, args.repeat)
    for name in ["surface:5", "surface:7", "color:5"]:
        inputs, m = score_inputs(name)
        bench(f"score_matrix {name} ({m}x{m} pairs)",
              py.score_matrix, c and c.score_matrix, inputs, args.repeat)


if __name__ == "__main__":
    main()
