"""Initial placement and swap insertion for a linear ion tape.

A gate is executable once its operands sit fewer than ``head_size`` slots
apart. Unexecutable gates are resolved one swap at a time: every candidate
moves one operand inward by less than ``max_swap_len`` slots and the
candidate that minimises the depth-discounted distance of the upcoming
two-qubit gates wins.
"""

from __future__ import annotations

import heapq
from collections import defaultdict, deque
from dataclasses import dataclass

from .circuit import Circuit, ContractViolation, Gate, build_dag, swap


class CapacityError(ValueError):
    """The circuit needs more qubits than the tape holds."""


class Mapping:
    """Bijection between logical qubits and ion slots on an ``n``-ion tape.

    Logical labels at or above the circuit's qubit count stand for spare ions.
    """

    __slots__ = ("_l2i", "_i2l")

    def __init__(self, logical_to_ion):
        l2i = list(logical_to_ion)
        if sorted(l2i) != list(range(len(l2i))):
            raise ValueError("mapping is not a bijection onto the tape")
        self._l2i = l2i
        self._i2l = [0] * len(l2i)
        for q, ion in enumerate(l2i):
            self._i2l[ion] = q

    @classmethod
    def identity(cls, n: int) -> Mapping:
        return cls(range(n))

    def __getitem__(self, q: int) -> int:
        return self._l2i[q]

    def __len__(self) -> int:
        return len(self._l2i)

    def __eq__(self, other) -> bool:
        return isinstance(other, Mapping) and self._l2i == other._l2i

    def __repr__(self) -> str:
        return f"Mapping({self._l2i})"

    @property
    def logical_to_ion(self) -> tuple[int, ...]:
        return tuple(self._l2i)

    @property
    def ion_to_logical(self) -> tuple[int, ...]:
        return tuple(self._i2l)

    def logical_at(self, ion: int) -> int:
        return self._i2l[ion]

    def copy(self) -> Mapping:
        return Mapping(self._l2i)

    def swap_ions(self, a: int, b: int) -> None:
        """Exchange whatever sits on ions ``a`` and ``b`` (in place)."""
        qa, qb = self._i2l[a], self._i2l[b]
        self._i2l[a], self._i2l[b] = qb, qa
        self._l2i[qa], self._l2i[qb] = b, a

    def swapped(self, a: int, b: int) -> Mapping:
        m = self.copy()
        m.swap_ions(a, b)
        return m


@dataclass(frozen=True)
class RouterConfig:
    head_size: int
    max_swap_len: int | None = None
    alpha: float = 0.5
    lookahead_window: int = 20

    def __post_init__(self):
        if self.max_swap_len is None:
            object.__setattr__(self, "max_swap_len", max(2, self.head_size - 2))
        if self.head_size < 2:
            raise ValueError("head_size must be at least 2")
        if not 2 <= self.max_swap_len <= max(2, self.head_size - 1):
            raise ValueError(f"max_swap_len must lie in [2, {max(2, self.head_size - 1)}]")
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie strictly between 0 and 1")
        if self.lookahead_window < 0:
            raise ValueError("lookahead_window must be non-negative")


@dataclass(frozen=True)
class RoutedCircuit:
    """Ion-level circuit plus routing bookkeeping."""

    circuit: Circuit
    swap_count: int
    opposing_swap_count: int
    initial_mapping: Mapping
    final_mapping: Mapping
    head_size: int

    @property
    def n_ions(self) -> int:
        return self.circuit.qubit_count

    @property
    def opposing_ratio(self) -> float:
        return self.opposing_swap_count / self.swap_count if self.swap_count else 0.0


# -- initial placement -------------------------------------------------------


def interaction_weights(circuit: Circuit) -> dict[tuple[int, int], int]:
    w: dict[tuple[int, int], int] = defaultdict(int)
    for g in circuit.gates:
        if g.is_two_qubit:
            a, b = sorted(g.qubits)
            w[a, b] += 1
    return dict(w)


def _layout_cost(order: list[int], weights, head_size: int) -> tuple[int, int]:
    pos = {q: i for i, q in enumerate(order)}
    long_edges = cost = 0
    for (a, b), w in weights.items():
        d = abs(pos[a] - pos[b])
        cost += w * d
        if d >= head_size:
            long_edges += w
    return long_edges, cost


def _cuthill_mckee(n: int, adj: dict[int, dict[int, int]]) -> list[int]:
    deg = [sum(adj[q].values()) for q in range(n)]
    seen = [False] * n
    order: list[int] = []
    for root in range(n):
        if seen[root]:
            continue
        # start each component from its lowest-degree member
        comp, queue = [], deque([root])
        seen[root] = True
        while queue:
            u = queue.popleft()
            comp.append(u)
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    queue.append(v)
        for q in comp:
            seen[q] = False
        start = min(comp, key=lambda q: (deg[q], q))
        seen[start] = True
        queue = deque([start])
        block = []
        while queue:
            u = queue.popleft()
            block.append(u)
            nbrs = sorted((v for v in adj[u] if not seen[v]), key=lambda v: (-adj[u][v], deg[v], v))
            for v in nbrs:
                seen[v] = True
                queue.append(v)
        order.extend(reversed(block))
    return order


def _refine(order: list[int], adj: dict[int, dict[int, int]], max_passes: int = 50) -> list[int]:
    """First-improvement pairwise exchange on the weighted linear arrangement cost."""
    n = len(order)
    pos = {q: i for i, q in enumerate(order)}
    for _ in range(max_passes):
        improved = False
        for i in range(n):
            for j in range(i + 1, n):
                u, v = order[i], order[j]
                delta = 0
                for x, w in adj[u].items():
                    if x != v:
                        delta += w * (abs(j - pos[x]) - abs(i - pos[x]))
                for x, w in adj[v].items():
                    if x != u:
                        delta += w * (abs(i - pos[x]) - abs(j - pos[x]))
                if delta < 0:
                    order[i], order[j] = v, u
                    pos[u], pos[v] = j, i
                    improved = True
        if not improved:
            break
    return order


def initial_mapping(circuit: Circuit, cfg: RouterConfig, n_ions: int | None = None) -> Mapping:
    """Linearize the interaction graph onto the leftmost ``qubit_count`` ions.

    A weighted reverse Cuthill-McKee order, polished by pairwise exchange, is
    compared against the identity layout on (gates spanning >= head_size,
    total weighted span); the identity wins ties.
    """
    n = circuit.qubit_count
    n_ions = n if n_ions is None else n_ions
    if n > n_ions:
        raise CapacityError(f"capacity exceeded: circuit uses {n} qubits but the tape holds {n_ions} ions")
    weights = interaction_weights(circuit)
    adj: dict[int, dict[int, int]] = {q: {} for q in range(n)}
    for (a, b), w in weights.items():
        adj[a][b] = w
        adj[b][a] = w
    order = _refine(_cuthill_mckee(n, adj), adj)
    order = min(order, order[::-1])
    best = list(range(n))
    if _layout_cost(order, weights, cfg.head_size) < _layout_cost(best, weights, cfg.head_size):
        best = order
    l2i = [0] * n_ions
    for ion, q in enumerate(best):
        l2i[q] = ion
    for q in range(n, n_ions):
        l2i[q] = q
    return Mapping(l2i)


# -- swap scoring --------------------------------------------------------------


def _sig(x: float) -> float:
    return float(f"{x:.12g}")


def score_mapping(mapping: Mapping, remaining, cfg: RouterConfig, current_depth: int) -> float:
    """Sum of operand distances of ``remaining`` (gate, depth) pairs, each
    discounted by ``alpha ** |depth - current_depth|``."""
    total = 0.0
    for g, depth in remaining:
        a, b = g.qubits
        total += abs(mapping[a] - mapping[b]) * cfg.alpha ** abs(depth - current_depth)
    return total


def is_opposing(mapping: Mapping, a: int, b: int, pending) -> bool:
    """True when swapping ions ``a``/``b`` shortens one pending gate anchored
    on ``a`` and a different one anchored on ``b``."""
    la, lb = mapping.logical_at(a), mapping.logical_at(b)
    after = mapping.swapped(a, b)
    gain_a, gain_b = set(), set()
    for idx, (g, _) in enumerate(pending):
        x, y = g.qubits
        if abs(after[x] - after[y]) >= abs(mapping[x] - mapping[y]):
            continue
        if la in g.qubits:
            gain_a.add(idx)
        if lb in g.qubits:
            gain_b.add(idx)
    return any(i != j for i in gain_a for j in gain_b)


def swap_candidates(a: int, b: int, max_swap_len: int) -> list[tuple[int, int]]:
    """Swaps pairing an operand ion with a strictly-between ion, shorter than max_swap_len."""
    lo, hi = min(a, b), max(a, b)
    out = set()
    for q in range(lo + 1, hi):
        if q - lo < max_swap_len:
            out.add((lo, q))
        if hi - q < max_swap_len:
            out.add((q, hi))
    return sorted(out)


def resolve_gate(gate: Gate, mapping: Mapping, cfg: RouterConfig, remaining, current_depth: int):
    """Pick swaps until ``gate`` fits under the head.

    ``gate`` uses logical operands; ``remaining`` is the scored window of
    (gate, depth) pairs and should include ``gate`` itself. Returns
    ``(swaps, mapping, opposing)`` where ``swaps`` are ion pairs and
    ``opposing`` flags each one.
    """
    m = mapping.copy()
    swaps: list[tuple[int, int]] = []
    flags: list[bool] = []
    q1, q2 = gate.qubits
    while abs(m[q1] - m[q2]) >= cfg.head_size:
        best_key, best = None, None
        for a, b in swap_candidates(m[q1], m[q2], cfg.max_swap_len):
            key = (_sig(score_mapping(m.swapped(a, b), remaining, cfg, current_depth)), a, b - a)
            if best_key is None or key < best_key:
                best_key, best = key, (a, b)
        flags.append(is_opposing(m, *best, remaining))
        swaps.append(best)
        m.swap_ions(*best)
    return swaps, m, flags


def _baseline_resolve(gate: Gate, mapping: Mapping, cfg: RouterConfig, remaining):
    m = mapping.copy()
    swaps, flags = [], []
    q1, q2 = gate.qubits
    step = cfg.head_size - 1
    while abs(m[q1] - m[q2]) >= cfg.head_size:
        a = m[q1]
        b = a + step if m[q2] > a else a - step
        pair = (min(a, b), max(a, b))
        flags.append(is_opposing(m, *pair, remaining))
        swaps.append(pair)
        m.swap_ions(*pair)
    return swaps, m, flags


# -- drivers -------------------------------------------------------------------


def lookahead(circuit: Circuit, pending, current: int, size: int):
    """The resolved gate plus the ``size`` pending two-qubit gates nearest to it
    in depth (ties by list position), as (gate, depth) pairs."""
    depth = circuit.depth
    d0 = depth[current]
    chosen = heapq.nsmallest(size + 1, pending, key=lambda j: (j != current, abs(depth[j] - d0), j))
    return [(circuit.gates[j], depth[j]) for j in chosen]


def _route(circuit: Circuit, cfg: RouterConfig, n_ions, initial, baseline: bool) -> RoutedCircuit:
    n_ions = circuit.qubit_count if n_ions is None else n_ions
    if circuit.qubit_count > n_ions:
        raise CapacityError(f"capacity exceeded: circuit uses {circuit.qubit_count} qubits but the tape holds {n_ions} ions")
    if cfg.head_size > n_ions:
        raise ContractViolation(f"head_size {cfg.head_size} exceeds tape length {n_ions}")
    m = initial_mapping(circuit, cfg, n_ions) if initial is None else initial.copy()
    if len(m) != n_ions:
        raise ContractViolation("initial mapping does not cover the tape")
    start = m.copy()
    gates, depth = circuit.gates, circuit.depth
    two_q = circuit.two_qubit_indices
    out: list[Gate] = []
    swap_count = opposing = 0
    k = 0
    for i, g in enumerate(gates):
        if g.is_two_qubit:
            if abs(m[g.qubits[0]] - m[g.qubits[1]]) >= cfg.head_size:
                window = lookahead(circuit, two_q[k:], i, cfg.lookahead_window)
                if baseline:
                    swaps, m, flags = _baseline_resolve(g, m, cfg, window)
                else:
                    swaps, m, flags = resolve_gate(g, m, cfg, window, depth[i])
                out.extend(swap(a, b, inserted=True) for a, b in swaps)
                swap_count += len(swaps)
                opposing += sum(flags)
            k += 1
        out.append(g.remap(m))
    return RoutedCircuit(
        circuit=build_dag(out, n_ions),
        swap_count=swap_count,
        opposing_swap_count=opposing,
        initial_mapping=start,
        final_mapping=m,
        head_size=cfg.head_size,
    )


def route(circuit: Circuit, cfg: RouterConfig, n_ions: int | None = None, initial: Mapping | None = None) -> RoutedCircuit:
    """Insert lookahead-scored swaps so every two-qubit gate spans < head_size."""
    return _route(circuit, cfg, n_ions, initial, baseline=False)


def route_baseline(circuit: Circuit, cfg: RouterConfig, n_ions: int | None = None, initial: Mapping | None = None) -> RoutedCircuit:
    """Reference router: hop the first operand toward the second in
    head-width steps, no lookahead."""
    return _route(circuit, cfg, n_ions, initial, baseline=True)
