import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_native
from tiltc.bench import BenchmarkSpec, generate
from tiltc.circuit import build_dag, rx, xx
from tiltc.frontend import load
from tiltc.oracle import min_swaps_single, replay_check, unitary_equal
from tiltc.router import (
    CapacityError,
    Mapping,
    RouterConfig,
    initial_mapping,
    resolve_gate,
    route,
    route_baseline,
    score_mapping,
    swap_candidates,
)
from tiltc.scheduler import schedule


def test_mapping_bijection():
    m = Mapping([2, 0, 1])
    assert m.ion_to_logical == (1, 2, 0)
    assert all(m.logical_at(m[q]) == q for q in range(3))
    m.swap_ions(0, 2)
    assert m.logical_to_ion == (0, 2, 1)
    with pytest.raises(ValueError):
        Mapping([0, 0, 1])


def test_config_validation():
    assert RouterConfig(16).max_swap_len == 14
    assert RouterConfig(2).max_swap_len == 2
    with pytest.raises(ValueError):
        RouterConfig(8, max_swap_len=8)
    with pytest.raises(ValueError):
        RouterConfig(8, alpha=1.0)


def test_initial_mapping_chain_is_identity():
    c = build_dag([xx(i, i + 1, 0.3) for i in range(7)] + [xx(3, 4, 0.1)], 8)
    assert initial_mapping(c, RouterConfig(4)).logical_to_ion == tuple(range(8))


def test_initial_mapping_empty_is_identity():
    c = build_dag([], 5)
    assert initial_mapping(c, RouterConfig(2), n_ions=7).logical_to_ion == tuple(range(7))


def test_initial_mapping_star_centers_hub():
    c = build_dag([xx(0, i, 0.5) for i in range(1, 7)], 7)
    m = initial_mapping(c, RouterConfig(3))

    def cost(pos):
        return sum(abs(pos[0] - pos[i]) for i in range(1, 7))

    best = min(cost(p) for p in itertools.permutations(range(7)))
    centers = {p[0] for p in itertools.permutations(range(7)) if cost(p) == best}
    assert best == 12 and centers == {3}
    assert cost(m.logical_to_ion) == best
    assert 7 / 3 <= m[0] <= 14 / 3


def test_initial_mapping_capacity():
    with pytest.raises(CapacityError):
        initial_mapping(build_dag([], 9), RouterConfig(4), n_ions=8)


def test_score_examples():
    cfg = RouterConfig(8, alpha=0.5)
    ident = Mapping.identity(12)
    assert score_mapping(ident, [], cfg, 3) == 0
    assert score_mapping(ident, [(xx(0, 7, 1.0), 3)], cfg, 3) == 7.0
    assert score_mapping(ident, [(xx(0, 4, 1.0), 3), (xx(1, 7, 1.0), 4)], cfg, 3) == 7.0


def test_candidates_strictly_between():
    assert swap_candidates(0, 4, 3) == [(0, 1), (0, 2), (2, 4), (3, 4)]
    assert all(b - a < 3 for a, b in swap_candidates(2, 11, 3))


def test_resolve_single_long_gate():
    cfg = RouterConfig(16, max_swap_len=15)
    g = xx(0, 20, 0.5)
    swaps, m, flags = resolve_gate(g, Mapping.identity(22), cfg, [(g, 1)], 1)
    assert len(swaps) == 1 == min_swaps_single(22, 0, 20, 16, 15)
    assert abs(m[0] - m[20]) <= 15
    assert all(b - a <= 14 for a, b in swaps)


def test_executable_gate_needs_no_swaps():
    c = build_dag([xx(0, 15, 0.5)], 16)
    r = route(c, RouterConfig(16, 15), initial=Mapping.identity(16))
    assert r.swap_count == 0


def test_opposing_swap_chosen_and_counted():
    # g1 on ions (2, 6) and g2 on ions (0, 4): swapping ions 2 and 4 shortens both
    c = build_dag([xx(2, 6, 0.5), xx(0, 4, 0.5)], 7)
    r = route(c, RouterConfig(4, 3), initial=Mapping.identity(7))
    assert r.swap_count == 1
    assert r.opposing_swap_count == 1
    assert (r.circuit.gates[0].kind, r.circuit.gates[0].qubits) == ("SWAP", (2, 4))
    assert r.circuit.gates[1].qubits == (4, 6)
    assert r.circuit.gates[2].qubits == (0, 2)


def test_nearest_neighbor_needs_no_swaps():
    c = build_dag([xx(i, i + 1, 0.2) for i in range(9)] * 3, 10)
    for L in (2, 3, 5):
        assert route(c, RouterConfig(L)).swap_count == 0


def test_bv_has_no_opposing_swaps():
    c = load(generate(BenchmarkSpec("BV", 32)))
    r = route(c, RouterConfig(8))
    assert r.swap_count > 0
    assert r.opposing_swap_count == 0


def test_qft16_beats_baseline():
    c = load(generate(BenchmarkSpec("QFT", 16)))
    cfg = RouterConfig(8, 7)
    linq, base = route(c, cfg), route_baseline(c, cfg)
    assert linq.swap_count <= base.swap_count
    assert linq.opposing_ratio >= base.opposing_ratio


def test_baseline_hops_head_width():
    c = build_dag([xx(0, 20, 0.5)], 22)
    r = route_baseline(c, RouterConfig(16, 15), initial=Mapping.identity(22))
    assert r.swap_count == math.ceil((20 - 15) / 15) == 1
    s = r.circuit.gates[0]
    assert s.kind == "SWAP" and s.qubits == (0, 15)
    assert r.final_mapping[0] == 15


def test_baseline_nearest_neighbor():
    c = build_dag([xx(i, i + 1, 0.2) for i in range(5)], 6)
    assert route_baseline(c, RouterConfig(2)).swap_count == 0


@pytest.mark.parametrize("L,msl", [(4, 2), (4, 3), (6, 3), (8, 7)])
def test_single_gate_lower_bound(L, msl):
    n = 20
    for d in range(L, n):
        c = build_dag([xx(0, d, 0.5)], n)
        r = route(c, RouterConfig(L, msl), initial=Mapping.identity(n))
        assert r.swap_count == math.ceil((d - (L - 1)) / (msl - 1))
        if n <= 12:
            assert r.swap_count == min_swaps_single(n, 0, d, L, msl)


@settings(max_examples=80, deadline=None)
@given(
    n=st.integers(2, 5),
    count=st.integers(0, 14),
    L=st.integers(2, 4),
    seed=st.integers(0, 2**32),
)
def test_routing_sound(n, count, L, seed):
    L = min(L, n)
    rng = random.Random(seed)
    c = random_native(n, count, rng)
    cfg = RouterConfig(L, rng.randint(2, max(2, L - 1)))
    start = list(range(n))
    rng.shuffle(start)
    for router in (route, route_baseline):
        r = router(c, cfg, initial=Mapping(start))
        s = schedule(r)
        assert replay_check(c, r, s)
        assert unitary_equal(c, r.circuit, permutation=r.final_mapping.logical_to_ion, initial=start, tol=1e-9)
        assert r.swap_count == sum(1 for g in r.circuit.gates if g.inserted)
        assert r.opposing_swap_count <= r.swap_count
        for g in r.circuit.gates:
            if g.is_two_qubit:
                assert abs(g.qubits[0] - g.qubits[1]) <= L - 1
            if g.inserted and router is route:
                assert 1 <= abs(g.qubits[0] - g.qubits[1]) <= cfg.max_swap_len - 1


def test_final_mapping_is_composed_transpositions():
    rng = random.Random(2)
    c = random_native(12, 60, rng)
    r = route(c, RouterConfig(4, 3))
    m = r.initial_mapping.copy()
    for g in r.circuit.gates:
        if g.inserted:
            m.swap_ions(*g.qubits)
    assert m == r.final_mapping


def test_route_deterministic():
    c = load(generate(BenchmarkSpec("LONGRANGE", 24, seed=3)))
    a = route(c, RouterConfig(6))
    b = route(c, RouterConfig(6))
    assert a == b


def test_route_capacity_error():
    with pytest.raises(CapacityError):
        route(build_dag([rx(0, 1.0)], 5), RouterConfig(2), n_ions=4)
