# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of :mod:`qstab.kernels._pykernels`; same signatures and results."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef enum:
    BOTH = 2


def list_schedule(durations, ion_ptr, ion_idx, res_ptr, res_idx, round_id, Py_ssize_t n_ions,
                  Py_ssize_t n_res):
    cdef double[::1] dur = np.ascontiguousarray(durations, dtype=np.float64)
    cdef long long[::1] ip = np.ascontiguousarray(ion_ptr, dtype=np.int64)
    cdef long long[::1] ii = np.ascontiguousarray(ion_idx, dtype=np.int64)
    cdef long long[::1] rp = np.ascontiguousarray(res_ptr, dtype=np.int64)
    cdef long long[::1] ri = np.ascontiguousarray(res_idx, dtype=np.int64)
    cdef long long[::1] rid = np.ascontiguousarray(round_id, dtype=np.int64)
    cdef Py_ssize_t n = dur.shape[0]
    start_arr = np.zeros(n, dtype=np.float64)
    end_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] start = start_arr
    cdef double[::1] end = end_arr
    cdef double[::1] ion_free = np.zeros(max(n_ions, 1), dtype=np.float64)
    cdef double[::1] res_free = np.zeros(max(n_res, 1), dtype=np.float64)
    cdef double floor = 0.0, horizon = 0.0, t, e
    cdef long long current = rid[0] if n > 0 else 0
    cdef Py_ssize_t k, j
    for k in range(n):
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
        e = t + dur[k]
        for j in range(ip[k], ip[k + 1]):
            ion_free[ii[j]] = e
        for j in range(rp[k], rp[k + 1]):
            res_free[ri[j]] = e
        start[k] = t
        end[k] = e
        if e > horizon:
            horizon = e
    return start_arr, end_arr


cdef double _tour(long long start, long long state, long long[::1] targets, Py_ssize_t lo,
                  Py_ssize_t hi, double[:, ::1] hop, long long[:, ::1] exit_side,
                  long long[:, ::1] entry_side, long long[::1] occ, double swap_const,
                  double swap_per_ion, unsigned char[::1] used, long long[::1] order) noexcept nogil:
    cdef Py_ssize_t m = hi - lo, k, j, picked = 0, best_j
    cdef long long cur = start, chain = occ[start], t, best
    cdef double cost = 0.0, c, best_cost
    for k in range(m):
        used[k] = 0
        if targets[lo + k] == cur:
            used[k] = 1
            order[picked] = cur
            picked += 1
    while picked < m:
        best = -1
        best_j = -1
        best_cost = 0.0
        for j in range(m):
            if used[j]:
                continue
            t = targets[lo + j]
            c = hop[cur, t]
            if chain > 1 and state != BOTH and state != exit_side[cur, t]:
                c += swap_const + swap_per_ion * chain
            if best < 0 or c < best_cost or (c == best_cost and t < best):
                best = t
                best_j = j
                best_cost = c
        cost += best_cost
        used[best_j] = 1
        chain = occ[best] + 1
        state = entry_side[cur, best] if chain > 1 else BOTH
        cur = best
        order[picked] = best
        picked += 1
    return cost


def itinerary(start, state, targets, hop, exit_side, entry_side, occ, swap_const, swap_per_ion):
    cdef long long[::1] tg = np.unique(np.asarray(targets, dtype=np.int64))
    cdef Py_ssize_t m = tg.shape[0]
    used = np.zeros(max(m, 1), dtype=np.uint8)
    order = np.zeros(max(m, 1), dtype=np.int64)
    cost = _tour(start, state, tg, 0, m,
                 np.ascontiguousarray(hop, dtype=np.float64),
                 np.ascontiguousarray(exit_side, dtype=np.int64),
                 np.ascontiguousarray(entry_side, dtype=np.int64),
                 np.ascontiguousarray(occ, dtype=np.int64),
                 swap_const, swap_per_ion, used, order)
    return cost, [int(x) for x in order[:m]]


def score_matrix(hop, exit_side, entry_side, occ, anc_trap, anc_state, stab_ptr, stab_traps,
                 double swap_const, double swap_per_ion):
    cdef double[:, ::1] h = np.ascontiguousarray(hop, dtype=np.float64)
    cdef long long[:, ::1] ex = np.ascontiguousarray(exit_side, dtype=np.int64)
    cdef long long[:, ::1] en = np.ascontiguousarray(entry_side, dtype=np.int64)
    cdef long long[::1] oc = np.ascontiguousarray(occ, dtype=np.int64)
    cdef long long[::1] at = np.ascontiguousarray(anc_trap, dtype=np.int64)
    cdef long long[::1] ast = np.ascontiguousarray(anc_state, dtype=np.int64)
    cdef long long[::1] sp = np.ascontiguousarray(stab_ptr, dtype=np.int64)
    cdef long long[::1] st = np.ascontiguousarray(stab_traps, dtype=np.int64)
    cdef Py_ssize_t n_s = sp.shape[0] - 1, n_a = at.shape[0], s, a, widest = 1
    for s in range(n_s):
        if sp[s + 1] - sp[s] > widest:
            widest = sp[s + 1] - sp[s]
    out_arr = np.zeros((n_s, n_a), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef unsigned char[::1] used = np.zeros(widest, dtype=np.uint8)
    cdef long long[::1] order = np.zeros(widest, dtype=np.int64)
    with nogil:
        for s in range(n_s):
            for a in range(n_a):
                out[s, a] = _tour(at[a], ast[a], st, sp[s], sp[s + 1], h, ex, en, oc,
                                  swap_const, swap_per_ion, used, order)
    return out_arr
