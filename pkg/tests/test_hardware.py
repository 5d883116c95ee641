import json

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_force_route
from qstab.hardware import (
    GATESWAP,
    IONSWAP,
    HardwareError,
    Mapping,
    MappingError,
    Router,
    ShuttlePath,
    TimingModel,
    grid_for,
    intratrap_swap_time,
    load_hw_config,
    make_grid,
    make_linear,
    parse_hw_shorthand,
    shuttle_path,
    shuttle_time,
    transit_time,
)

T = TimingModel()


def test_default_timing():
    assert (T.split, T.move_per_segment, T.merge) == (80, 5, 80)
    assert (T.x_junction, T.y_junction) == (120, 100)
    assert (T.gate2, T.gate1, T.measure, T.cool, T.reset) == (100, 10, 100, 100, 0)
    assert T.gateswap == 300


def test_adjacent_linear_shuttle():
    topo = make_linear(4)
    path = shuttle_path(topo, 1, 2)
    assert len(path) == 1 and path.junctions == ()
    assert shuttle_time(T, path) == 165.0


def test_x_junction_three_segments():
    path = ShuttlePath((0, 9, 10, 1), ((0, 9), (9, 10), (10, 1)), ((9, "X"),), "R", "L")
    assert shuttle_time(T, path) == 295.0


def test_same_trap_is_free():
    topo = make_linear(3)
    path = shuttle_path(topo, 2, 2)
    assert path.empty and shuttle_time(T, path) == 0.0


def test_swap_costs():
    assert intratrap_swap_time(T, GATESWAP, 5) == 300.0
    assert intratrap_swap_time(T, IONSWAP, 5) == 210.0
    assert intratrap_swap_time(T, IONSWAP, 2) == 84.0
    with pytest.raises(HardwareError):
        intratrap_swap_time(T, GATESWAP, 1)


def test_shuttle_time_with_swaps():
    path = shuttle_path(make_linear(2), 0, 1)
    assert shuttle_time(T, path, intra_source_swaps=1, source_chain=5) == 465.0
    ion = TimingModel(swap_method=IONSWAP)
    assert shuttle_time(ion, path, intra_dest_swaps=1, dest_chain=3) == 165.0 + 126.0


def test_linear_transit_passes_through_traps():
    topo = make_linear(5)
    path = shuttle_path(topo, 0, 4)
    assert path.nodes == (0, 1, 2, 3, 4)
    assert shuttle_time(T, path) == 80 + 4 * 5 + 80


@pytest.mark.parametrize("a,b,c", [(0, 2, 5), (1, 3, 4), (0, 1, 2)])
def test_linear_additivity(a, b, c):
    topo = make_linear(6)
    t = lambda x, y: shuttle_time(T, shuttle_path(topo, x, y))
    assert t(a, c) == t(a, b) + t(b, c) - T.split - T.merge


def test_grid_sizes():
    assert make_grid(1, 1).n_traps == 1
    assert make_grid(6, 10).n_traps == 60
    g = make_grid(2, 2)
    for node in g.nodes:
        assert len(g.neighbors[node.id]) <= 4
    assert grid_for(8).n_traps >= 8


def test_grid_diagonal_crosses_one_junction():
    g = make_grid(2, 2)
    path = shuttle_path(g, 0, 3)
    assert len(path.junctions) == 1
    kinds = [n.kind for n in g.nodes]
    cost, nodes = brute_force_route(g.n_traps, kinds, g.segments, 0, 3)
    assert transit_time(T, path) == cost
    assert path.nodes == nodes


@pytest.mark.parametrize("rows,cols", [(2, 2), (2, 3), (3, 3)])
def test_grid_routes_match_brute_force(rows, cols):
    g = make_grid(rows, cols)
    kinds = [n.kind for n in g.nodes]
    for a in range(g.n_traps):
        for b in range(g.n_traps):
            if a == b:
                continue
            path = shuttle_path(g, a, b)
            cost, nodes = brute_force_route(g.n_traps, kinds, g.segments, a, b)
            assert transit_time(T, path) == pytest.approx(cost)
            assert path.nodes == nodes


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 5), st.data())
def test_route_cost_symmetric(rows, cols, data):
    g = make_grid(rows, cols)
    a = data.draw(st.integers(0, g.n_traps - 1))
    b = data.draw(st.integers(0, g.n_traps - 1))
    fwd = shuttle_time(T, shuttle_path(g, a, b))
    back = shuttle_time(T, shuttle_path(g, b, a))
    assert fwd == back


def test_router_matches_direct_calls():
    g = make_grid(2, 3)
    r = Router(g, T)
    for a in range(g.n_traps):
        for b in range(g.n_traps):
            assert r.hop[a][b] == shuttle_time(T, shuttle_path(g, a, b))


def test_timing_validation():
    with pytest.raises(HardwareError):
        TimingModel(gate2=0)
    with pytest.raises(HardwareError):
        TimingModel(reset=-1)
    with pytest.raises(HardwareError):
        TimingModel.from_dict({"gateswap": 10})
    with pytest.raises(HardwareError, match="unknown"):
        TimingModel.from_dict({"teleport": 1})
    assert TimingModel.from_dict({"gate2": 50}).gateswap == 150


def test_gate2_by_capacity():
    t = TimingModel.from_dict({"gate2_by_capacity": {"10": 150}})
    assert t.gate2_time(10) == 150 and t.gate2_time(5) == 100


def test_topology_validation():
    with pytest.raises(HardwareError):
        make_linear(0)
    with pytest.raises(HardwareError):
        make_linear(2, capacity=1)
    with pytest.raises(HardwareError):
        make_linear(2, capacity=3, cooling_ions_occupy=True)


def test_cooling_ions_reduce_capacity():
    topo = make_linear(2, capacity=6, cooling_ions_occupy=True)
    assert topo.usable_capacity(0) == 4


def test_shorthand_and_config(tmp_path):
    assert parse_hw_shorthand("linear:4x5").n_traps == 4
    assert parse_hw_shorthand("grid:2x3x5").n_traps == 6
    with pytest.raises(HardwareError):
        parse_hw_shorthand("ring:4")
    cfg = tmp_path / "hw.json"
    cfg.write_text(json.dumps({"topology": "grid", "rows": 2, "cols": 2, "capacity": 4,
                               "timing": {"swap_method": "ionswap"}}))
    topo, timing = load_hw_config(cfg)
    assert topo.n_traps == 4 and topo.capacities == (4,) * 4
    assert timing.swap_method == IONSWAP
    with pytest.raises(HardwareError):
        load_hw_config({"topology": "torus"})


def test_mapping_operations():
    topo = make_linear(2, capacity=3)
    m = Mapping.from_chains([[0, 1], [2]], topo)
    assert m.side_state(0) == "L" and m.side_state(1) == "R" and m.side_state(2) == "B"
    with pytest.raises(MappingError):
        m.split(0, 0, "R")
    m.split(1, 0, "R")
    assert m.in_transit == {1: 0}
    m.merge(1, 1, "L")
    assert m.freeze() == ((0,), (1, 2))
    m.swap(1, 1, 2)
    assert m.freeze() == ((0,), (2, 1))


def test_mapping_capacity_enforced():
    topo = make_linear(2, capacity=2)
    m = Mapping.from_chains([[0, 1], [2, 3]], topo)
    m.split(1, 0, "R")
    with pytest.raises(MappingError, match="full"):
        m.merge(1, 1, "L")
    with pytest.raises(MappingError):
        Mapping.from_chains([[0, 1, 2], []], topo)
    with pytest.raises(MappingError):
        Mapping.from_chains([[0], [0]], topo)
