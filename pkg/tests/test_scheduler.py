import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_native
from tiltc.bench import BenchmarkSpec, generate
from tiltc.circuit import BARRIER, ContractViolation, build_dag, rx, xx
from tiltc.frontend import load
from tiltc.oracle import optimal_moves, replay_check
from tiltc.router import RouterConfig, route
from tiltc.scheduler import UnschedulableError, _State, batch_layers, executable_set, schedule


def test_executable_set_whole_window():
    c = build_dag([xx(0, 1, 0.1), rx(2, 0.3), xx(1, 3, 0.2)], 6)
    assert executable_set(0, _State(c), 4) == [0, 1, 2]


def test_executable_set_successor_out_of_window():
    c = build_dag([xx(0, 1, 0.1), xx(1, 4, 0.2)], 6)
    assert executable_set(0, _State(c), 4) == [0]


def test_executable_set_chain_fixpoint():
    c = build_dag([xx(0, 1, 0.1), xx(1, 2, 0.2), xx(2, 3, 0.3)], 8)
    assert executable_set(0, _State(c), 4) == [0, 1, 2]
    assert executable_set(1, _State(c), 4) == []


def test_single_window_is_one_step():
    c = build_dag([xx(0, 3, 0.1), rx(1, 1.0), xx(2, 1, 0.4)], 8)
    s = schedule(c, 8, 4)
    assert s.step_count == 1 and s.move_count == 0 and s.move_distance == 0


def test_two_clusters():
    N, L = 10, 4
    c = build_dag([xx(0, 1, 0.1), rx(0, 0.2), xx(8, 9, 0.3), xx(9, 8, 0.1)], N)
    s = schedule(c, N, L)
    assert s.step_count == 2
    assert s.move_count == 1 and optimal_moves(c, N, L) == 1
    assert s.move_distance == N - L


def test_larger_head_fewer_moves():
    c = load(generate(BenchmarkSpec("QFT", 16)))
    moves = {}
    for L in (8, 12):
        r = route(c, RouterConfig(L))
        moves[L] = schedule(r, 16, L).move_count
    assert moves[12] <= moves[8]


def test_tie_break_prefers_nearby_position():
    c = build_dag([xx(4, 5, 0.1), xx(4, 5, 0.2), rx(1, 0.1), rx(9, 0.1)], 10)
    s = schedule(c, 10, 3)
    assert s.positions == [3, 1, 7]
    assert s.move_distance == 2 + 6


def test_rejects_wide_gate():
    with pytest.raises(UnschedulableError):
        schedule(build_dag([xx(0, 5, 0.1)], 6), 6, 4)
    with pytest.raises(ContractViolation):
        schedule(build_dag([xx(0, 1, 0.1)], 3), 3, 4)


def test_barrier_waits_for_all_ions():
    c = build_dag([rx(0, 0.1), rx(5, 0.1), BARRIER, rx(0, 0.2)], 6)
    s = schedule(c, 6, 2)
    order = [i for _, b in s.steps for i in b]
    assert order.index(2) > order.index(0) and order.index(2) > order.index(1)
    assert order.index(3) > order.index(2)


def test_batch_layers():
    c = build_dag([xx(0, 1, 0.1), rx(2, 0.1), xx(1, 2, 0.1), rx(0, 0.1)], 3)
    assert batch_layers(c, [0, 1, 2, 3]) == [[0, 1], [2, 3]]
    assert batch_layers(c, [2, 3]) == [[2, 3]]


@settings(max_examples=60, deadline=None)
@given(n=st.integers(3, 12), count=st.integers(0, 25), L=st.integers(2, 5), seed=st.integers(0, 2**32))
def test_schedule_invariants(n, count, L, seed):
    L = min(L, n)
    c = random_native(n, count, random.Random(seed))
    r = route(c, RouterConfig(L))
    s = schedule(r)
    ids = sorted(i for _, b in s.steps for i in b)
    assert ids == list(range(len(r.circuit.gates)))
    done = set()
    for p, batch in s.steps:
        assert 0 <= p <= n - L
        for i in batch:
            assert all(p <= q < p + L for q in r.circuit.gates[i].qubits)
            assert all(j in done for j in r.circuit.preds[i])
            done.add(i)
    assert s.step_count <= max(1, len(r.circuit.gates))
    assert replay_check(c, r, s)
    assert s == schedule(r)
