"""Brute-force references for testing the compiler.

Nothing here reuses the DAG, router, or scheduler code: dependencies are
recomputed from operand overlap, the head window is re-tested, and gate
matrices come from a separate table.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np


class OracleOverflow(RuntimeError):
    """Instance exceeds the oracle's search budget."""


@dataclass(frozen=True)
class OracleBudget:
    max_ions: int = 10
    max_gates: int = 8
    max_states: int = 500_000


# -- dense unitaries -----------------------------------------------------------

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _rot(pauli, theta):
    return math.cos(theta / 2) * _I2 - 1j * math.sin(theta / 2) * pauli


def _matrix(kind: str, angle):
    if kind == "RX":
        return _rot(_X, angle)
    if kind == "RY":
        return _rot(_Y, angle)
    if kind == "RZ":
        return _rot(_Z, angle)
    if kind == "H":
        return (_X + _Z) / math.sqrt(2)
    if kind == "X":
        return _X
    if kind == "Y":
        return _Y
    if kind == "Z":
        return _Z
    if kind == "XX":
        # exp(-i * angle * X(x)X)
        return math.cos(angle) * np.eye(4) - 1j * math.sin(angle) * np.kron(_X, _X)
    if kind == "CX":
        return np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    if kind == "CZ":
        return np.diag([1, 1, 1, -1]).astype(complex)
    if kind == "SWAP":
        return np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
    raise ValueError(f"no matrix for {kind}")


def unitary(gates, n: int) -> np.ndarray:
    """Dense unitary with qubit 0 as the most significant bit."""
    if n > 5:
        raise OracleOverflow(f"{n} qubits exceeds the dense-unitary cap of 5")
    dim = 2**n
    u = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for g in gates:
        if g.kind == "BARRIER":
            continue
        qs = list(g.qubits)
        k = len(qs)
        mat = _matrix(g.kind, g.angle).reshape((2,) * (2 * k))
        # contract the gate's input legs against the state's qubit axes
        u = np.tensordot(mat, u, axes=(list(range(k, 2 * k)), qs))
        u = np.moveaxis(u, list(range(k)), qs)
    return u.reshape(dim, dim)


def permutation_matrix(perm, n: int) -> np.ndarray:
    """Matrix sending qubit ``q``'s value to position ``perm[q]``."""
    dim = 2**n
    p = np.zeros((dim, dim))
    for x in range(dim):
        y = 0
        for q in range(n):
            if (x >> (n - 1 - q)) & 1:
                y |= 1 << (n - 1 - perm[q])
        p[y, x] = 1
    return p


def _phase_distance(a: np.ndarray, b: np.ndarray) -> float:
    k = np.argmax(np.abs(a))
    if abs(a.flat[k]) < 1e-12:
        return float(np.max(np.abs(b)))
    phase = b.flat[k] / a.flat[k]
    phase /= abs(phase) or 1.0
    return float(np.max(np.abs(b - phase * a)))


def unitary_equal(a, b, permutation=None, tol: float = 1e-9, initial=None) -> bool:
    """Check ``U_b @ P(initial) == P(permutation) @ U_a`` up to global phase.

    ``a``/``b`` expose ``gates`` and ``qubit_count``. Permutations map qubit
    labels of ``a`` to wires of ``b``; ``None`` means identity.
    """
    n = a.qubit_count
    if b.qubit_count != n:
        raise ValueError("circuits act on different numbers of qubits")
    ua = unitary(a.gates, n)
    ub = unitary(b.gates, n)
    if initial is not None:
        ub = ub @ permutation_matrix(list(initial)[:n], n)
    if permutation is not None:
        ua = permutation_matrix(list(permutation)[:n], n) @ ua
    return _phase_distance(ua, ub) <= tol


# -- routing -------------------------------------------------------------------


def min_swaps_single(n_ions: int, a: int, b: int, head_size: int, max_swap_len: int) -> int:
    """Fewest swaps (each spanning 1..max_swap_len-1 slots) bringing the
    qubits on ions ``a`` and ``b`` within head_size-1 of each other."""
    if n_ions > 40:
        raise OracleOverflow("chain too long for swap BFS")
    start = (a, b)
    seen = {start: 0}
    queue = deque([start])
    while queue:
        x, y = queue.popleft()
        d = seen[(x, y)]
        if abs(x - y) <= head_size - 1:
            return d
        for i in range(n_ions):
            for j in range(i + 1, min(n_ions, i + max_swap_len)):
                nx = j if x == i else i if x == j else x
                ny = j if y == i else i if y == j else y
                if (nx, ny) not in seen:
                    seen[(nx, ny)] = d + 1
                    queue.append((nx, ny))
    raise OracleOverflow("target unreachable")


# -- scheduling ----------------------------------------------------------------


def _touches(gate, n_ions: int) -> frozenset:
    return frozenset(range(n_ions)) if gate.kind == "BARRIER" else frozenset(gate.qubits)


def optimal_moves(routed, n_ions: int, head_size: int, budget: OracleBudget = OracleBudget()) -> int:
    """Exact minimum tape moves (first placement free) by breadth-first search
    over (head position, executed set) states. Arriving at a position always
    runs everything runnable there, which never hurts."""
    circuit = getattr(routed, "circuit", routed)
    gates = list(circuit.gates)
    if n_ions > budget.max_ions or len(gates) > budget.max_gates:
        raise OracleOverflow(f"instance ({n_ions} ions, {len(gates)} gates) exceeds budget")
    ops = [_touches(g, n_ions) for g in gates]
    need = []
    for i in range(len(gates)):
        m = 0
        for j in range(i):
            if ops[i] & ops[j]:
                m |= 1 << j
        need.append(m)
    full = (1 << len(gates)) - 1

    def run(done: int, p: int) -> int:
        lo, hi = p, p + head_size - 1
        changed = True
        while changed:
            changed = False
            for i, g in enumerate(gates):
                bit = 1 << i
                if done & bit or need[i] & ~done:
                    continue
                if all(lo <= q <= hi for q in g.qubits):
                    done |= bit
                    changed = True
        return done

    positions = range(n_ions - head_size + 1)
    if not gates:
        return 0
    layer = {(p, run(0, p)) for p in positions}
    seen = set(layer)
    moves = 0
    while layer:
        if any(done == full for _, done in layer):
            return moves
        nxt = set()
        for p, done in layer:
            for q in positions:
                if q == p:
                    continue
                s = (q, run(done, q))
                if s not in seen:
                    seen.add(s)
                    nxt.add(s)
        if len(seen) > budget.max_states:
            raise OracleOverflow("state budget exhausted")
        layer = nxt
        moves += 1
    raise OracleOverflow("no schedule completes the circuit")


# -- replay --------------------------------------------------------------------


@dataclass(frozen=True)
class ReplayResult:
    ok: bool
    message: str = "ok"

    def __bool__(self) -> bool:
        return self.ok


def replay_check(original, routed, schedule) -> ReplayResult:
    """Re-execute ``schedule`` and check it implements ``original``.

    Tracks the ion/logical relabelling through every inserted swap; each
    other executed gate must be the next original gate on each of its
    logical qubits.
    """
    circuit = routed.circuit
    gates = circuit.gates
    n_ions = schedule.n_ions
    L = schedule.head_size
    n_logical = original.qubit_count
    ion_to_logical = list(routed.initial_mapping.ion_to_logical)
    if len(ion_to_logical) != n_ions:
        return ReplayResult(False, "initial mapping does not cover the tape")

    queue: dict[int, deque] = {q: deque() for q in range(n_logical)}
    for j, g in enumerate(original.gates):
        for q in _touches(g, n_logical):
            queue[q].append(j)

    # routed gates in program order on each ion; each must run in that order
    on_ion: dict[int, deque] = {ion: deque() for ion in range(n_ions)}
    for i, g in enumerate(gates):
        for ion in _touches(g, n_ions):
            if ion in on_ion:
                on_ion[ion].append(i)
    executed = set()
    for step, (p, batch) in enumerate(schedule.steps):
        if not 0 <= p <= n_ions - L:
            return ReplayResult(False, f"step {step}: head position {p} off the tape")
        for i in batch:
            if not 0 <= i < len(gates) or i in executed:
                return ReplayResult(False, f"step {step}: gate {i} unknown or repeated")
            executed.add(i)
            g = gates[i]
            if len(g.qubits) == 2 and abs(g.qubits[0] - g.qubits[1]) > L - 1:
                return ReplayResult(False, f"gate {i}: distance violation ({g.kind} on ions {g.qubits})")
            if any(q < p or q > p + L - 1 for q in g.qubits):
                return ReplayResult(False, f"gate {i}: ions {g.qubits} outside head at {p}")
            for ion in _touches(g, n_ions):
                if on_ion[ion][0] != i:
                    j = on_ion[ion][0]
                    return ReplayResult(False, f"dependency violation: gate {i} ran before gate {j} on ion {ion}")
            for ion in _touches(g, n_ions):
                on_ion[ion].popleft()
            if g.kind == "SWAP" and g.inserted:
                a, b = g.qubits
                ion_to_logical[a], ion_to_logical[b] = ion_to_logical[b], ion_to_logical[a]
                continue
            if g.kind == "BARRIER":
                logical = ()
                touched = range(n_logical)
            else:
                logical = tuple(ion_to_logical[q] for q in g.qubits)
                if any(q >= n_logical for q in logical):
                    return ReplayResult(False, f"gate {i}: acts on a spare ion")
                touched = logical
            heads = {queue[q][0] if queue[q] else None for q in touched}
            if len(heads) != 1 or None in heads:
                return ReplayResult(False, f"gate {i}: touches the wrong logical qubits {logical}")
            j = heads.pop()
            want = original.gates[j]
            if want.kind != g.kind or tuple(want.qubits) != logical or want.angle != g.angle:
                return ReplayResult(False, f"gate {i}: expected original gate {j} ({want.kind} on {want.qubits})")
            for q in touched:
                queue[q].popleft()
    if len(executed) != len(gates):
        return ReplayResult(False, f"{len(gates) - len(executed)} routed gates never executed")
    if any(queue[q] for q in queue):
        return ReplayResult(False, "original gates left unexecuted")
    if tuple(ion_to_logical) != tuple(routed.final_mapping.ion_to_logical):
        return ReplayResult(False, "final mapping mismatch")
    return ReplayResult(True)
