import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qstab import kernels

compiled = kernels.compiled
needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


@st.composite
def op_streams(draw):
    n_ops = draw(st.integers(1, 40))
    n_ions = draw(st.integers(1, 6))
    n_res = draw(st.integers(1, 5))
    durations, ion_ptr, ion_idx, res_ptr, res_idx, rounds = [], [0], [], [0], [], []
    r = 0
    for _ in range(n_ops):
        durations.append(draw(st.sampled_from([0.0, 5.0, 10.0, 80.0, 100.0, 120.0])))
        ions = draw(st.sets(st.integers(0, n_ions - 1), min_size=1, max_size=2))
        ion_idx.extend(sorted(ions))
        ion_ptr.append(len(ion_idx))
        res = draw(st.sets(st.integers(0, n_res - 1), max_size=2))
        res_idx.extend(sorted(res))
        res_ptr.append(len(res_idx))
        r += draw(st.sampled_from([0, 0, 0, 1]))
        rounds.append(r)
    arr = lambda x, t: np.asarray(x, dtype=t)
    return (arr(durations, np.float64), arr(ion_ptr, np.int64), arr(ion_idx, np.int64),
            arr(res_ptr, np.int64), arr(res_idx, np.int64), arr(rounds, np.int64), n_ions, n_res)


@st.composite
def route_tables(draw):
    n = draw(st.integers(1, 6))
    hop = np.zeros((n, n))
    for a in range(n):
        for b in range(a + 1, n):
            hop[a, b] = hop[b, a] = draw(st.sampled_from([165.0, 170.0, 265.0, 295.0, 400.0]))
    exit_side = np.array([[draw(st.integers(0, 1)) for _ in range(n)] for _ in range(n)], dtype=np.int64)
    entry = np.array([[draw(st.integers(0, 1)) for _ in range(n)] for _ in range(n)], dtype=np.int64)
    occ = np.array([draw(st.integers(0, 5)) for _ in range(n)], dtype=np.int64)
    return n, hop, exit_side, entry, occ


@needs_compiled
@settings(max_examples=150, deadline=None)
@given(op_streams())
def test_list_schedule_backends_agree(case):
    s1, e1 = kernels.python.list_schedule(*case)
    s2, e2 = compiled.list_schedule(*case)
    np.testing.assert_array_equal(s1, s2)
    np.testing.assert_array_equal(e1, e2)


@settings(max_examples=100, deadline=None)
@given(op_streams())
def test_list_schedule_respects_order(case):
    dur, ip, ii, rp, ri, rid, _, _ = case
    start, end = kernels.list_schedule(*case)
    np.testing.assert_allclose(end - start, dur)
    for k in range(len(dur)):
        for j in range(k):
            shared = set(ii[ip[j]:ip[j + 1]]) & set(ii[ip[k]:ip[k + 1]]) or (
                set(ri[rp[j]:rp[j + 1]]) & set(ri[rp[k]:rp[k + 1]]))
            if shared or rid[j] < rid[k]:
                assert start[k] >= end[j]


@needs_compiled
@settings(max_examples=150, deadline=None)
@given(route_tables(), st.data())
def test_itinerary_backends_agree(tables, data):
    n, hop, ex, en, occ = tables
    start = data.draw(st.integers(0, n - 1))
    state = data.draw(st.integers(0, 3))
    targets = np.array(sorted(data.draw(st.sets(st.integers(0, n - 1), min_size=1))), dtype=np.int64)
    const, per = data.draw(st.sampled_from([(300.0, 0.0), (0.0, 42.0)]))
    c1, o1 = kernels.python.itinerary(start, state, targets, hop, ex, en, occ, const, per)
    c2, o2 = compiled.itinerary(start, state, targets, hop, ex, en, occ, const, per)
    assert c1 == c2 and list(o1) == list(o2)


@needs_compiled
@settings(max_examples=100, deadline=None)
@given(route_tables(), st.data())
def test_score_matrix_backends_agree(tables, data):
    n, hop, ex, en, occ = tables
    n_anc = data.draw(st.integers(1, 4))
    anc_trap = np.array([data.draw(st.integers(0, n - 1)) for _ in range(n_anc)], dtype=np.int64)
    anc_state = np.array([data.draw(st.integers(0, 3)) for _ in range(n_anc)], dtype=np.int64)
    stabs = [sorted(data.draw(st.sets(st.integers(0, n - 1), min_size=1))) for _ in range(data.draw(st.integers(1, 5)))]
    ptr = np.cumsum([0] + [len(s) for s in stabs]).astype(np.int64)
    flat = np.array([t for s in stabs for t in s], dtype=np.int64)
    args = (hop, ex, en, occ, anc_trap, anc_state, ptr, flat, 300.0, 0.0)
    np.testing.assert_array_equal(kernels.python.score_matrix(*args), compiled.score_matrix(*args))


def test_itinerary_greedy_example():
    hop = np.array([[0, 165, 170], [165, 0, 165], [170, 165, 0]], dtype=float)
    side = np.array([[1, 1, 1], [0, 1, 1], [0, 0, 0]], dtype=np.int64)
    entry = 1 - side
    occ = np.array([1, 1, 1], dtype=np.int64)
    cost, order = kernels.itinerary(0, 2, np.array([1, 2]), hop, side, entry, occ, 300.0, 0.0)
    assert list(order) == [1, 2]
    # arrives on the left of trap 1 next to one ion, leaves on the right
    assert cost == 165 + 300 + 165


def test_backend_forced_to_python():
    env = dict(os.environ, QSTAB_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from qstab import kernels; print(kernels.BACKEND)"],
        capture_output=True, text=True, env=env, check=True,
    )
    assert out.stdout.strip() == "python"


@needs_compiled
def test_backend_prefers_compiled():
    assert kernels.BACKEND == "cython"
