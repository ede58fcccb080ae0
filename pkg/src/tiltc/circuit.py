"""Native-gate circuit representation with an operand-overlap dependency DAG."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

NATIVE_KINDS = frozenset({"RX", "RY", "RZ", "XX", "SWAP", "BARRIER"})
ROTATIONS = frozenset({"RX", "RY", "RZ"})
TWO_QUBIT = frozenset({"XX", "SWAP", "CX", "CZ"})


class MalformedCircuitError(ValueError):
    """Raised when a gate list cannot form a valid circuit."""


class ContractViolation(ValueError):
    """Raised when an operation is called outside its documented domain."""


@dataclass(frozen=True)
class Gate:
    """A single operation.

    ``kind`` is upper-case. BARRIER carries no operands and orders against
    every qubit. ``inserted`` marks SWAPs added by the router, which relabel
    the mapping rather than act on logical state.
    """

    kind: str
    qubits: tuple[int, ...]
    angle: float | None = None
    inserted: bool = False

    @property
    def is_two_qubit(self) -> bool:
        return len(self.qubits) == 2

    def remap(self, table) -> Gate:
        return Gate(self.kind, tuple(table[q] for q in self.qubits), self.angle, self.inserted)


def rx(q: int, theta: float) -> Gate:
    return Gate("RX", (q,), float(theta))


def ry(q: int, theta: float) -> Gate:
    return Gate("RY", (q,), float(theta))


def rz(q: int, theta: float) -> Gate:
    return Gate("RZ", (q,), float(theta))


def xx(a: int, b: int, theta: float) -> Gate:
    return Gate("XX", (a, b), float(theta))


def swap(a: int, b: int, inserted: bool = False) -> Gate:
    return Gate("SWAP", (a, b), None, inserted)


BARRIER = Gate("BARRIER", ())


def check_native(gate: Gate, qubit_count: int) -> None:
    kind = gate.kind
    if kind not in NATIVE_KINDS:
        raise MalformedCircuitError(f"non-native gate {kind}")
    if kind in ROTATIONS:
        if len(gate.qubits) != 1:
            raise MalformedCircuitError(f"{kind} takes one operand")
        if gate.angle is None or not math.isfinite(gate.angle):
            raise MalformedCircuitError(f"{kind} needs a finite angle")
    elif kind in ("XX", "SWAP"):
        if len(gate.qubits) != 2 or gate.qubits[0] == gate.qubits[1]:
            raise MalformedCircuitError(f"{kind} takes two distinct operands")
        if kind == "XX" and (gate.angle is None or not math.isfinite(gate.angle)):
            raise MalformedCircuitError("XX needs a finite angle")
    elif gate.qubits:
        raise MalformedCircuitError("BARRIER takes no operands")
    for q in gate.qubits:
        if not 0 <= q < qubit_count:
            raise MalformedCircuitError(f"operand {q} out of range for {qubit_count} qubits")


@dataclass(frozen=True)
class Circuit:
    """Immutable native circuit.

    ``preds``/``succs`` hold gate indices; an edge links each gate to the
    previous gate on every operand it touches. ``depth`` is the ASAP level,
    starting at 1.
    """

    qubit_count: int
    gates: tuple[Gate, ...]
    preds: tuple[tuple[int, ...], ...] = field(repr=False)
    succs: tuple[tuple[int, ...], ...] = field(repr=False)
    depth: tuple[int, ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self.gates)

    def depth_of(self, index: int) -> int:
        return self.depth[index]

    @property
    def max_depth(self) -> int:
        return max(self.depth, default=0)

    @property
    def two_qubit_indices(self) -> list[int]:
        return [i for i, g in enumerate(self.gates) if g.is_two_qubit]

    def count(self, kind: str) -> int:
        return sum(1 for g in self.gates if g.kind == kind)


def touched(gate: Gate, qubit_count: int) -> tuple[int, ...]:
    """Qubits a gate orders against (all of them for a barrier)."""
    if gate.kind == "BARRIER":
        return tuple(range(qubit_count))
    return gate.qubits


def build_dag(gates, qubit_count: int) -> Circuit:
    """Validate native gates and link each to its predecessor on every operand."""
    gates = tuple(gates)
    for g in gates:
        check_native(g, qubit_count)
    last: list[int | None] = [None] * qubit_count
    preds: list[tuple[int, ...]] = []
    succs: list[list[int]] = [[] for _ in gates]
    depth: list[int] = []
    for i, g in enumerate(gates):
        ps = set()
        for q in touched(g, qubit_count):
            if last[q] is not None:
                ps.add(last[q])
            last[q] = i
        p = tuple(sorted(ps))
        preds.append(p)
        for j in p:
            succs[j].append(i)
        depth.append(1 + max((depth[j] for j in p), default=0))
    return Circuit(
        qubit_count=qubit_count,
        gates=gates,
        preds=tuple(preds),
        succs=tuple(tuple(s) for s in succs),
        depth=tuple(depth),
    )


def gate_distance(gate: Gate, mapping) -> int:
    """Ion-slot distance between the two operands of ``gate`` under ``mapping``.

    ``mapping`` is anything indexable by logical qubit (a ``Mapping`` or a
    plain list); pass ``None`` when the gate already uses ion operands.
    """
    if len(gate.qubits) != 2:
        raise ContractViolation(f"{gate.kind} is not a two-operand gate")
    a, b = gate.qubits
    if mapping is not None:
        a, b = mapping[a], mapping[b]
    return abs(a - b)
