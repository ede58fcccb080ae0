"""Gate timing, shuttling-heating fidelity model, and schedule pricing.

Units: times in microseconds unless suffixed ``_s``; distances in ion slots
unless suffixed ``_um``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields

from .circuit import ContractViolation
from .scheduler import Schedule, batch_layers


@dataclass(frozen=True)
class NoiseParams:
    gamma: float = 1e-6  # background heating, per us
    epsilon: float = 1e-2  # loop-closure error per two-qubit gate
    k0: float = 2.0  # quanta per shuttle at n_ref ions
    n_ref: float = 8.0
    single_qubit_error: float = 1e-3
    swap_cost_factor: int = 3
    shuttle_rate: float = 1.0  # um per us
    ion_spacing: float = 5.0  # um
    single_qubit_time: float = 10.0  # us

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) < 0:
                raise ValueError(f"{f.name} must be non-negative")
        if not self.single_qubit_error < 1:
            raise ValueError("single_qubit_error must be below 1")
        if self.shuttle_rate <= 0:
            raise ValueError("shuttle_rate must be positive")
        if self.n_ref <= 0:
            raise ValueError("n_ref must be positive")

    def heating_per_move(self, n_ions: int) -> float:
        return self.k0 * math.sqrt(n_ions / self.n_ref)

    def to_dict(self) -> dict:
        return asdict(self)


def gate_time(d: int, two_qubit: bool = True, single_qubit_time: float = 10.0) -> float:
    """Amplitude-modulated gate duration (us) for operands ``d`` slots apart."""
    if not two_qubit:
        return single_qubit_time
    if d < 1:
        raise ContractViolation(f"two-qubit gate distance must be >= 1, got {d}")
    return 38 * d + 10


def two_qubit_fidelity(d: int, m: int, n: int, p: NoiseParams) -> float:
    """Fidelity of one two-qubit gate after ``m`` tape moves on an ``n``-ion chain.

    ``1 - gamma*tau + (1 - (1 + eps)**(2*m*k + 1))`` with ``k`` scaled by
    ``sqrt(n / n_ref)``, clamped to [0, 1].
    """
    tau = gate_time(d)
    k = p.heating_per_move(n)
    f = 1 - p.gamma * tau + (1 - (1 + p.epsilon) ** (2 * m * k + 1))
    return min(1.0, max(0.0, f))


@dataclass(frozen=True)
class GateRecord:
    index: int
    kind: str
    ions: tuple[int, ...]
    angle: float | None
    moves: int
    tau_us: float
    fidelity: float


@dataclass(frozen=True)
class FidelityReport:
    success_rate: float
    move_count: int
    move_distance_slots: int
    move_distance_um: float
    shuttle_time_us: float
    gate_time_us: float
    t_exec_s: float
    params: NoiseParams
    per_gate_log: tuple[GateRecord, ...] = field(repr=False)


def gate_cost(gate, m: int, n: int, p: NoiseParams) -> tuple[float, float]:
    """(tau_us, fidelity) of one ion-level gate executed after ``m`` moves."""
    if gate.kind == "BARRIER":
        return 0.0, 1.0
    if len(gate.qubits) == 1:
        return p.single_qubit_time, 1.0 - p.single_qubit_error
    d = abs(gate.qubits[0] - gate.qubits[1])
    f = two_qubit_fidelity(d, m, n, p)
    if gate.kind == "SWAP":
        return p.swap_cost_factor * gate_time(d), f**p.swap_cost_factor
    return gate_time(d), f


def evaluate(schedule: Schedule, routed, p: NoiseParams) -> FidelityReport:
    """Price a schedule: product of gate fidelities and shuttle + layered gate time."""
    circuit = getattr(routed, "circuit", routed)
    n = schedule.n_ions
    seen = set()
    log: list[GateRecord] = []
    success = 1.0
    gate_us = 0.0
    moves = 0
    prev = None
    for pos, batch in schedule.steps:
        if prev is not None and pos != prev:
            moves += 1
        prev = pos
        lo, hi = pos, pos + schedule.head_size - 1
        taus = {}
        for i in batch:
            g = circuit.gates[i]
            if i in seen or not all(lo <= q <= hi for q in g.qubits):
                raise ContractViolation(f"gate {i} cannot run in step at head position {pos}")
            seen.add(i)
            tau, f = gate_cost(g, moves, n, p)
            taus[i] = tau
            success *= f
            log.append(GateRecord(i, g.kind, g.qubits, g.angle, moves, tau, f))
        for layer in batch_layers(circuit, batch):
            gate_us += max(taus[i] for i in layer)
    if len(seen) != len(circuit.gates):
        raise ContractViolation("schedule does not cover every gate")
    dist_um = schedule.move_distance * p.ion_spacing
    shuttle_us = dist_um / p.shuttle_rate
    return FidelityReport(
        success_rate=success,
        move_count=schedule.move_count,
        move_distance_slots=schedule.move_distance,
        move_distance_um=dist_um,
        shuttle_time_us=shuttle_us,
        gate_time_us=gate_us,
        t_exec_s=(shuttle_us + gate_us) * 1e-6,
        params=p,
        per_gate_log=tuple(log),
    )
