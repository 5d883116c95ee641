"""Reference implementations of the hot loops (no compiled dependency).

Side states: 0 = left end, 1 = right end, 2 = alone in the chain (either end
works), 3 = interior.
"""

from __future__ import annotations

import numpy as np

BOTH = 2


def list_schedule(durations, ion_ptr, ion_idx, res_ptr, res_idx, round_id, n_ions, n_res):
    """In-order list scheduling with a barrier between rounds.

    Each op starts once its ions and resources are free and the previous
    round has drained; returns ``(start, end)`` arrays.
    """
    dur = np.asarray(durations, dtype=np.float64).tolist()
    ip = np.asarray(ion_ptr).tolist()
    ii = np.asarray(ion_idx).tolist()
    rp = np.asarray(res_ptr).tolist()
    ri = np.asarray(res_idx).tolist()
    rid = np.asarray(round_id).tolist()
    ion_free = [0.0] * n_ions
    res_free = [0.0] * n_res
    start = [0.0] * len(dur)
    end = [0.0] * len(dur)
    floor = 0.0
    horizon = 0.0
    current = rid[0] if rid else 0
    for k, d in enumerate(dur):
        if rid[k] != current:
            current = rid[k]
            floor = horizon
        t = floor
        for j in range(ip[k], ip[k + 1]):
            if ion_free[ii[j]] > t:
                t = ion_free[ii[j]]
        for j in range(rp[k], rp[k + 1]):
            if res_free[ri[j]] > t:
                t = res_free[ri[j]]
        e = t + d
        for j in range(ip[k], ip[k + 1]):
            ion_free[ii[j]] = e
        for j in range(rp[k], rp[k + 1]):
            res_free[ri[j]] = e
        start[k] = t
        end[k] = e
        if e > horizon:
            horizon = e
    return np.asarray(start), np.asarray(end)


def _itinerary(start, state, targets, hop, exit_side, entry_side, occ, swap_const, swap_per_ion):
    remaining = sorted(set(targets))
    order = []
    cost = 0.0
    cur = start
    chain = occ[start]
    if cur in remaining:
        remaining.remove(cur)
        order.append(cur)
    while remaining:
        best = -1
        best_cost = 0.0
        for t in remaining:
            c = hop[cur][t]
            side = exit_side[cur][t]
            if chain > 1 and state != BOTH and state != side:
                c += swap_const + swap_per_ion * chain
            if best < 0 or c < best_cost:
                best, best_cost = t, c
        cost += best_cost
        chain = occ[best] + 1
        state = entry_side[cur][best] if chain > 1 else BOTH
        cur = best
        remaining.remove(best)
        order.append(best)
    return cost, order


def itinerary(start, state, targets, hop, exit_side, entry_side, occ, swap_const, swap_per_ion):
    """Greedy nearest-trap tour from ``start`` over ``targets``: ``(cost, order)``."""
    return _itinerary(
        int(start), int(state), [int(t) for t in targets],
        np.asarray(hop).tolist(), np.asarray(exit_side).tolist(),
        np.asarray(entry_side).tolist(), np.asarray(occ).tolist(),
        float(swap_const), float(swap_per_ion),
    )


def score_matrix(hop, exit_side, entry_side, occ, anc_trap, anc_state, stab_ptr, stab_traps,
                 swap_const, swap_per_ion):
    """Itinerary cost for every (stabilizer, ancilla) pair, shape ``(S, A)``."""
    hop_l = np.asarray(hop).tolist()
    ex = np.asarray(exit_side).tolist()
    en = np.asarray(entry_side).tolist()
    oc = np.asarray(occ).tolist()
    sp = np.asarray(stab_ptr).tolist()
    st = np.asarray(stab_traps).tolist()
    at = np.asarray(anc_trap).tolist()
    ast = np.asarray(anc_state).tolist()
    n_s = len(sp) - 1
    out = np.zeros((n_s, len(at)))
    for s in range(n_s):
        targets = st[sp[s]:sp[s + 1]]
        for a in range(len(at)):
            out[s, a] = _itinerary(at[a], ast[a], targets, hop_l, ex, en, oc,
                                   float(swap_const), float(swap_per_ion))[0]
    return out
