import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from oracles import noise_grid, twirled_channel_numeric
from qstab.noise import NoiseError, coherence_from_p, dumps, error_budget, pta_channel
from qstab.simulator import LatencyReport


def test_coherence_anchors():
    assert coherence_from_p(1e-3) == (10.0, 10.0)
    assert coherence_from_p(1e-4) == (100.0, 100.0)


def test_coherence_clamped():
    assert coherence_from_p(0.5) == (10.0, 10.0)
    assert coherence_from_p(1e-7) == (100.0, 100.0)
    assert coherence_from_p(3e-4)[0] == pytest.approx(10 ** (-math.log10(3e-4) - 2))


@pytest.mark.parametrize("p", [0.0, 1.0, -1e-3, 2.0])
def test_coherence_rejects_bad_p(p):
    with pytest.raises(NoiseError):
        coherence_from_p(p)


def test_zero_idle_is_identity():
    assert pta_channel(0.0, 10.0, 10.0) == (0.0, 0.0, 0.0)


def test_ten_millisecond_idle():
    px, py, pz = pta_channel(0.01, 10.0, 10.0)
    assert px == py == pytest.approx(2.49875e-4, rel=1e-5)
    assert pz == pytest.approx(2.49875e-4, rel=1e-5)


def test_x_y_symmetry():
    px, py, _ = pta_channel(0.3, 20.0, 15.0)
    assert px == py


def test_bad_channel_parameters():
    with pytest.raises(NoiseError):
        pta_channel(-1.0, 10.0, 10.0)
    with pytest.raises(NoiseError):
        pta_channel(1.0, 10.0, 25.0)
    with pytest.raises(NoiseError):
        pta_channel(1.0, 0.0, 1.0)


@pytest.mark.parametrize("t,T1,T2", noise_grid())
def test_matches_lindblad_oracle(t, T1, T2):
    got = pta_channel(t, T1, T2)
    ref = twirled_channel_numeric(t, T1, T2)
    for g, r in zip(got, ref):
        if r == 0.0:
            assert abs(g) < 1e-15
        else:
            assert abs(g - r) / abs(r) < 1e-6


@settings(max_examples=80, deadline=None)
@given(st.floats(1e-6, 50.0), st.floats(1e-6, 50.0), st.floats(1.0, 100.0), st.floats(0.05, 1.0))
def test_amplitude_terms_monotone_in_time(t1, t2, T1, ratio):
    T2 = 2 * T1 * ratio
    lo, hi = sorted((t1, t2))
    a, b = pta_channel(lo, T1, T2), pta_channel(hi, T1, T2)
    assert a[0] <= b[0] and a[1] <= b[1]
    assert sum(b) <= 1.0


@settings(max_examples=80, deadline=None)
@given(st.floats(1e-6, 50.0), st.floats(1e-6, 50.0), st.floats(1.0, 100.0), st.floats(0.5, 1.0))
def test_all_terms_monotone_when_t2_at_least_t1(t1, t2, T1, ratio):
    T2 = 2 * T1 * ratio
    lo, hi = sorted((t1, t2))
    a, b = pta_channel(lo, T1, T2), pta_channel(hi, T1, T2)
    assert all(x <= y for x, y in zip(a, b))


def test_dephasing_term_relaxes_after_peak():
    # with T2 < T1, pz overshoots 1/4 and then decays toward it
    early, late = pta_channel(1.0, 1.0, 0.5)[2], pta_channel(3.0, 1.0, 0.5)[2]
    assert early > late > 0.25


def test_grid_monotone():
    grid = noise_grid()
    for i in range(0, len(grid), 5):
        vals = [pta_channel(*p) for p in grid[i:i + 5]]
        for a, b in zip(vals, vals[1:]):
            assert all(x <= y for x, y in zip(a, b))


def test_error_budget_fields():
    (b,) = error_budget(10_000.0, 1e-3)
    assert (b.rate_1q, b.rate_2q, b.rate_meas) == (1e-4, 1e-3, 1e-3)
    assert b.t_round_s == pytest.approx(0.01)
    assert (b.T1_s, b.T2_s) == (10.0, 10.0)
    assert b.px == pytest.approx(2.49875e-4, rel=1e-5)


def test_error_budget_per_distinct_round():
    rep = LatencyReport(3000.0, [1000.0, 2000.0, 1000.0], 0, 0, 0, [], ())
    budgets = error_budget(rep, 1e-4)
    assert [b.t_round_s for b in budgets] == [pytest.approx(1e-3), pytest.approx(2e-3)]
    assert isinstance(json.loads(dumps(budgets)), list)
    assert isinstance(json.loads(dumps(budgets[:1])), dict)


def test_error_budget_overrides():
    (b,) = error_budget(500.0, 1e-3, T1=5.0, T2=4.0)
    assert (b.T1_s, b.T2_s) == (5.0, 4.0)
    with pytest.raises(NoiseError):
        error_budget(500.0, 1e-3, T1=1.0, T2=5.0)
