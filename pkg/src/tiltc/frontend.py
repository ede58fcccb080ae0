"""Line-oriented ``.lqasm`` reader/writer and lowering to the native gate set.

Grammar (one or more ``;``-terminated statements per line, ``//`` comments)::

    qreg q[N];
    h|x|y|z q[i];
    rx|ry|rz(angle) q[i];
    cx|cz|swap q[i],q[j];
    xx(angle) q[i],q[j];
    barrier;

Angles are real literals or arithmetic over ``pi`` (``pi/4``, ``-pi/2``,
``3*pi/2``).
"""

from __future__ import annotations

import ast
import math
import operator
import re
from dataclasses import dataclass

from .circuit import BARRIER, Circuit, Gate, build_dag, rx, ry, rz, xx

HALF_PI = math.pi / 2


class ParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"{message}, line {line}")
        self.line = line


@dataclass(frozen=True)
class Program:
    """Parsed source: gates may still be non-native (H, X, CX, ...)."""

    qubit_count: int
    gates: tuple[Gate, ...]


_ONE_Q = {"h": "H", "x": "X", "y": "Y", "z": "Z"}
_ROT = {"rx": "RX", "ry": "RY", "rz": "RZ"}
_TWO_Q = {"cx": "CX", "cz": "CZ", "swap": "SWAP"}

_QREG = re.compile(r"qreg\s+(\w+)\s*\[\s*(\d+)\s*\]$")
_STMT = re.compile(r"([a-z]+)\s*(?:\((.*)\))?\s*(.*)$", re.S)
_OPERAND = re.compile(r"(\w+)\s*\[\s*(\d+)\s*\]$")

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def _eval_angle(node):
    if isinstance(node, ast.Expression):
        return _eval_angle(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
        return float(node.value)
    if isinstance(node, ast.Name) and node.id == "pi":
        return math.pi
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_angle(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_angle(node.left), _eval_angle(node.right))
    raise ValueError("unsupported angle expression")


def parse_angle(text: str) -> float:
    try:
        value = _eval_angle(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError):
        raise ValueError(f"malformed angle {text.strip()!r}") from None
    if not math.isfinite(value):
        raise ValueError(f"malformed angle {text.strip()!r}")
    return value


def parse(src: str) -> Program:
    """Parse ``.lqasm`` text. Errors carry the 1-based source line."""
    reg: str | None = None
    n = 0
    gates: list[Gate] = []
    for lineno, raw in enumerate(src.splitlines(), start=1):
        line = raw.split("//", 1)[0].strip()
        if not line:
            continue
        *stmts, tail = line.split(";")
        if tail.strip():
            raise ParseError(f"missing ';' after {tail.strip()!r}", lineno)
        for stmt in stmts:
            stmt = stmt.strip()
            if not stmt:
                continue
            m = _QREG.match(stmt)
            if m:
                if reg is not None:
                    raise ParseError("only one qreg is supported", lineno)
                reg, n = m.group(1), int(m.group(2))
                continue
            if stmt == "barrier" or stmt.startswith("barrier "):
                gates.append(BARRIER)
                continue
            gates.append(_parse_gate(stmt, reg, n, lineno))
    return Program(n, tuple(gates))


def _parse_gate(stmt: str, reg: str | None, n: int, lineno: int) -> Gate:
    m = _STMT.match(stmt)
    if not m:
        raise ParseError(f"unknown statement {stmt!r}", lineno)
    name, angle_text, rest = m.group(1), m.group(2), m.group(3)
    if name in _ONE_Q or name in _TWO_Q:
        arity, kind, wants_angle = (1, _ONE_Q[name], False) if name in _ONE_Q else (2, _TWO_Q[name], False)
    elif name in _ROT:
        arity, kind, wants_angle = 1, _ROT[name], True
    elif name == "xx":
        arity, kind, wants_angle = 2, "XX", True
    else:
        raise ParseError(f"unknown statement {stmt!r}", lineno)
    if wants_angle != (angle_text is not None):
        raise ParseError(f"malformed angle in {stmt!r}", lineno)
    angle = None
    if wants_angle:
        try:
            angle = parse_angle(angle_text)
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    if reg is None:
        raise ParseError("gate before qreg declaration", lineno)
    parts = [p.strip() for p in rest.split(",")]
    if len(parts) != arity:
        raise ParseError(f"{name} expects {arity} operand(s)", lineno)
    qubits = []
    for part in parts:
        om = _OPERAND.match(part)
        if not om or om.group(1) != reg:
            raise ParseError(f"malformed operand {part!r}", lineno)
        q = int(om.group(2))
        if q >= n:
            raise ParseError("index out of range", lineno)
        qubits.append(q)
    if arity == 2 and qubits[0] == qubits[1]:
        raise ParseError("two-qubit gate on a single qubit", lineno)
    return Gate(kind, tuple(qubits), angle)


def cx_sequence(c: int, t: int) -> list[Gate]:
    """CNOT as rotations around one XX(pi/4)."""
    return [ry(c, HALF_PI), xx(c, t, math.pi / 4), rx(c, -HALF_PI), rx(t, -HALF_PI), ry(c, -HALF_PI)]


def h_sequence(q: int) -> list[Gate]:
    return [ry(q, HALF_PI), rx(q, math.pi)]


def lower(gate: Gate) -> list[Gate]:
    kind, qs = gate.kind, gate.qubits
    if kind == "CX":
        return cx_sequence(*qs)
    if kind == "CZ":
        c, t = qs
        return h_sequence(t) + cx_sequence(c, t) + h_sequence(t)
    if kind == "H":
        return h_sequence(qs[0])
    if kind == "X":
        return [rx(qs[0], math.pi)]
    if kind == "Y":
        return [ry(qs[0], math.pi)]
    if kind == "Z":
        return [rz(qs[0], math.pi)]
    return [gate]


def decompose(program: Program) -> Circuit:
    """Rewrite every gate into {RX, RY, RZ, XX, SWAP, BARRIER}."""
    native: list[Gate] = []
    for g in program.gates:
        native.extend(lower(g))
    return build_dag(native, program.qubit_count)


def load(text: str) -> Circuit:
    return decompose(parse(text))


def format_angle(theta: float) -> str:
    return repr(float(theta))


def dumps(circuit, header: str | None = None) -> str:
    """Serialize native (or source-level) gates back to ``.lqasm``."""
    lines = []
    if header:
        lines.extend(f"// {h}" for h in header.splitlines())
    lines.append(f"qreg q[{circuit.qubit_count}];")
    for g in circuit.gates:
        if g.kind == "BARRIER":
            lines.append("barrier;")
            continue
        name = g.kind.lower()
        ops = ",".join(f"q[{q}]" for q in g.qubits)
        if g.angle is not None:
            lines.append(f"{name}({format_angle(g.angle)}) {ops};")
        else:
            lines.append(f"{name} {ops};")
    return "\n".join(lines) + "\n"
