import math
import random

import pytest

from tiltc.circuit import build_dag, rx, ry, rz, swap, xx

ACCEPTANCE_LINES: list[str] = []


def random_native(n: int, count: int, rng: random.Random, with_swaps: bool = True):
    gates = []
    kinds = ["RX", "RY", "RZ", "XX", "XX"] + (["SWAP"] if with_swaps else [])
    for _ in range(count):
        kind = rng.choice(kinds if n > 1 else ["RX", "RY", "RZ"])
        theta = rng.uniform(-math.pi, math.pi)
        if kind in ("XX", "SWAP"):
            a, b = rng.sample(range(n), 2)
            gates.append(xx(a, b, theta) if kind == "XX" else swap(a, b))
        else:
            q = rng.randrange(n)
            gates.append({"RX": rx, "RY": ry, "RZ": rz}[kind](q, theta))
    return build_dag(gates, n)


def random_source(n: int, count: int, rng: random.Random) -> str:
    lines = [f"qreg q[{n}];"]
    for _ in range(count):
        op = rng.choice(["h", "x", "y", "z", "rx", "ry", "rz", "cx", "cz", "xx", "swap"] if n > 1 else ["h", "x", "rz"])
        if op in ("cx", "cz", "xx", "swap"):
            a, b = rng.sample(range(n), 2)
            arg = f"({rng.uniform(-3, 3)!r})" if op == "xx" else ""
            lines.append(f"{op}{arg} q[{a}],q[{b}];")
        elif op in ("rx", "ry", "rz"):
            lines.append(f"{op}({rng.choice(['pi/4', '-pi/2', '3*pi/2', repr(rng.uniform(-3, 3))])}) q[{rng.randrange(n)}];")
        else:
            lines.append(f"{op} q[{rng.randrange(n)}];")
    return "\n".join(lines) + "\n"


@pytest.fixture
def accept():
    """Record one acceptance verdict line, then assert it."""

    def record(number: int, ok: bool, text: str):
        line = f"[criterion {number:2d}] {'PASS' if ok else 'FAIL'}  {text}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
