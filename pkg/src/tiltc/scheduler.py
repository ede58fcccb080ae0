"""Greedy tape-movement scheduling.

Each round scans every head position, computes the set of gates that could
run there (closing over dependencies that become ready inside the window),
and commits the position with the most gates.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .circuit import Circuit, ContractViolation


class UnschedulableError(ContractViolation):
    """A gate can never fit under the head."""


@dataclass(frozen=True)
class Schedule:
    """Ordered ``(head position, gate indices)`` steps over a routed circuit."""

    steps: tuple[tuple[int, tuple[int, ...]], ...]
    n_ions: int
    head_size: int

    @property
    def positions(self) -> list[int]:
        return [p for p, _ in self.steps]

    @property
    def move_count(self) -> int:
        ps = self.positions
        return sum(1 for a, b in zip(ps, ps[1:]) if a != b)

    @property
    def move_distance(self) -> int:
        ps = self.positions
        return sum(abs(b - a) for a, b in zip(ps, ps[1:]))

    @property
    def step_count(self) -> int:
        return len(self.steps)


class _State:
    """Remaining-work bookkeeping: unmet predecessor counts and the ready set."""

    def __init__(self, circuit: Circuit):
        self.circuit = circuit
        self.missing = [len(p) for p in circuit.preds]
        self.ready = {i for i, c in enumerate(self.missing) if c == 0}
        self.left = len(circuit.gates)

    def commit(self, batch) -> None:
        for i in batch:
            self.ready.discard(i)
            for s in self.circuit.succs[i]:
                self.missing[s] -= 1
                if self.missing[s] == 0:
                    self.ready.add(s)
        self.left -= len(batch)


def _fits(gate, lo: int, hi: int) -> bool:
    return all(lo <= q <= hi for q in gate.qubits)


def executable_set(p: int, state: _State, head_size: int) -> list[int]:
    """Dependency-closed batch runnable with the head at ``p``, in topological order."""
    circuit = state.circuit
    gates, succs = circuit.gates, circuit.succs
    lo, hi = p, p + head_size - 1
    heap = [i for i in state.ready if _fits(gates[i], lo, hi)]
    heapq.heapify(heap)
    missing: dict[int, int] = {}
    batch = []
    while heap:
        i = heapq.heappop(heap)
        batch.append(i)
        for s in succs[i]:
            c = missing.get(s)
            if c is None:
                c = state.missing[s]
            c -= 1
            missing[s] = c
            if c == 0 and _fits(gates[s], lo, hi):
                heapq.heappush(heap, s)
    return batch


def schedule(routed, n_ions: int | None = None, head_size: int | None = None) -> Schedule:
    """Greedy maximal-batch head placement until the circuit drains.

    Ties go to the position nearest the current head, then the smaller index.
    The first placement is not counted as a move.
    """
    circuit: Circuit = getattr(routed, "circuit", routed)
    n_ions = circuit.qubit_count if n_ions is None else n_ions
    if head_size is None:
        head_size = routed.head_size
    if not 2 <= head_size <= n_ions:
        raise ContractViolation(f"head_size {head_size} must lie in [2, {n_ions}]")
    for g in circuit.gates:
        if any(q >= n_ions for q in g.qubits):
            raise UnschedulableError(f"{g.kind} on ions {g.qubits} lies off a {n_ions}-ion tape")
        if len(g.qubits) == 2 and abs(g.qubits[0] - g.qubits[1]) >= head_size:
            raise UnschedulableError(f"{g.kind} on ions {g.qubits} spans >= head size {head_size}")
    state = _State(circuit)
    steps = []
    current: int | None = None
    positions = range(n_ions - head_size + 1)
    while state.left:
        best_key, best_p, best_batch = None, None, None
        for p in positions:
            batch = executable_set(p, state, head_size)
            key = (-len(batch), abs(p - current) if current is not None else 0, p)
            if best_key is None or key < best_key:
                best_key, best_p, best_batch = key, p, batch
        if not best_batch:
            raise ContractViolation("no progress possible; dependency graph is inconsistent")
        state.commit(best_batch)
        steps.append((best_p, tuple(best_batch)))
        current = best_p
    return Schedule(tuple(steps), n_ions, head_size)


def batch_layers(circuit: Circuit, batch) -> list[list[int]]:
    """Split a batch into ASAP dependency layers (only intra-batch edges count)."""
    members = set(batch)
    level: dict[int, int] = {}
    layers: list[list[int]] = []
    for i in batch:
        lv = 1 + max((level[j] for j in circuit.preds[i] if j in members), default=-1)
        level[i] = lv
        if lv == len(layers):
            layers.append([])
        layers[lv].append(i)
    return layers
