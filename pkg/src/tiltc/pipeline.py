"""Device configuration, end-to-end compilation, and artifact formats."""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .circuit import Circuit, Gate, build_dag
from .frontend import decompose, dumps, format_angle, parse
from .noise import FidelityReport, NoiseParams, evaluate
from .oracle import replay_check
from .router import Mapping, RoutedCircuit, RouterConfig, route
from .scheduler import Schedule, schedule

SCHEDULE_VERSION = "1"


class ConfigError(ValueError):
    pass


class InvariantFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class DeviceSpec:
    tape_ions: int
    head_size: int
    noise: NoiseParams
    router: RouterConfig

    def __post_init__(self):
        if not 2 <= self.head_size <= self.tape_ions:
            raise ConfigError(f"head_size {self.head_size} must lie in [2, tape_ions={self.tape_ions}]")
        if self.router.head_size != self.head_size:
            raise ConfigError("router head_size disagrees with device head_size")

    def with_max_swap_len(self, value: int) -> DeviceSpec:
        r = self.router
        try:
            router = RouterConfig(r.head_size, value, r.alpha, r.lookahead_window)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return DeviceSpec(self.tape_ions, self.head_size, self.noise, router)

    def to_dict(self) -> dict:
        return {
            "device": {"tape_ions": self.tape_ions, "head_size": self.head_size},
            "router": asdict(self.router),
            "noise": self.noise.to_dict(),
        }


_REQUIRED = ("device.tape_ions", "device.head_size", "noise.gamma", "noise.epsilon")
_INT_KEYS = {"device.tape_ions", "device.head_size", "router.max_swap_len", "router.lookahead_window", "noise.swap_cost_factor"}


def parse_device(text: str) -> DeviceSpec:
    """Read flat ``section.key = value`` lines (``#`` starts a comment)."""
    noise_keys = {f.name for f in fields(NoiseParams)}
    known = {"device.tape_ions", "device.head_size", "router.max_swap_len", "router.alpha", "router.lookahead_window"}
    known |= {f"noise.{k}" for k in noise_keys}
    values: dict[str, float | int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (s.strip() for s in line.partition("="))
        if not sep or key not in known:
            raise ConfigError(f"unknown or malformed config entry {line!r}, line {lineno}")
        try:
            values[key] = int(value) if key in _INT_KEYS else float(value)
        except ValueError:
            raise ConfigError(f"bad value for {key}: {value!r}, line {lineno}") from None
    missing = [k for k in _REQUIRED if k not in values]
    if missing:
        raise ConfigError(f"missing required config keys: {', '.join(missing)}")
    L = values["device.head_size"]
    try:
        router = RouterConfig(
            head_size=L,
            max_swap_len=values.get("router.max_swap_len"),
            alpha=values.get("router.alpha", 0.5),
            lookahead_window=values.get("router.lookahead_window", 20),
        )
        noise = NoiseParams(**{k.split(".", 1)[1]: v for k, v in values.items() if k.startswith("noise.")})
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return DeviceSpec(values["device.tape_ions"], L, noise, router)


def format_device(dev: DeviceSpec) -> str:
    lines = []
    for section, entries in dev.to_dict().items():
        for key, value in entries.items():
            if section == "router" and key == "head_size":
                continue  # same as device.head_size
            lines.append(f"{section}.{key} = {value}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CompileResult:
    circuit: Circuit
    routed: RoutedCircuit
    schedule: Schedule
    report: FidelityReport
    device: DeviceSpec


def compile_circuit(circuit: Circuit, dev: DeviceSpec, check: bool = True) -> CompileResult:
    """Map, route, schedule, and price a native circuit on ``dev``."""
    routed = route(circuit, dev.router, dev.tape_ions)
    sched = schedule(routed, dev.tape_ions, dev.head_size)
    report = evaluate(sched, routed, dev.noise)
    if check:
        verdict = replay_check(circuit, routed, sched)
        if not verdict:
            raise InvariantFailure(f"replay check failed: {verdict.message}")
    return CompileResult(circuit, routed, sched, report, dev)


def compile_source(text: str, dev: DeviceSpec, check: bool = True) -> CompileResult:
    return compile_circuit(decompose(parse(text)), dev, check)


def metrics(result: CompileResult) -> dict:
    r, s, rep = result.routed, result.schedule, result.report
    return {
        "qubits": result.circuit.qubit_count,
        "gate_count": len(r.circuit.gates),
        "two_qubit_gate_count": len(r.circuit.two_qubit_indices),
        "swap_count": r.swap_count,
        "opposing_swap_count": r.opposing_swap_count,
        "opposing_ratio": r.opposing_ratio,
        "move_count": s.move_count,
        "step_count": s.step_count,
        "move_distance_slots": s.move_distance,
        "move_distance_um": rep.move_distance_um,
        "shuttle_time_us": rep.shuttle_time_us,
        "gate_time_us": rep.gate_time_us,
        "t_exec_s": rep.t_exec_s,
        "success_rate": rep.success_rate,
    }


def report_json(result: CompileResult) -> str:
    body = {"metrics": metrics(result), **result.device.to_dict()}
    return json.dumps(body, indent=2, sort_keys=True) + "\n"


# -- schedule listing ------------------------------------------------------------


def format_schedule(result: CompileResult) -> str:
    """One ``MOVE <p>`` per step followed by its ``GATE`` lines."""
    r, s = result.routed, result.schedule
    records = {rec.index: rec for rec in result.report.per_gate_log}
    out = [
        f"# tiltc schedule v{SCHEDULE_VERSION}",
        f"# n_ions={s.n_ions} head_size={s.head_size} swaps={r.swap_count} opposing={r.opposing_swap_count}",
        "# initial_mapping=" + ",".join(map(str, r.initial_mapping.logical_to_ion)),
        "# final_mapping=" + ",".join(map(str, r.final_mapping.logical_to_ion)),
    ]
    for p, batch in s.steps:
        out.append(f"MOVE {p}")
        for i in batch:
            g = r.circuit.gates[i]
            rec = records[i]
            parts = ["GATE", g.kind]
            if g.angle is not None:
                parts.append(format_angle(g.angle))
            parts.extend(map(str, g.qubits))
            tail = f"; id={i} m={rec.moves} tau={format_angle(rec.tau_us)} f={format_angle(rec.fidelity)}"
            if g.inserted:
                tail += " inserted=1"
            out.append(" ".join(parts) + " " + tail)
    return "\n".join(out) + "\n"


def read_schedule(text: str) -> tuple[RoutedCircuit, Schedule]:
    """Rebuild the routed circuit and schedule from a ``schedule.txt`` listing."""
    meta: dict[str, str] = {}
    steps: list[tuple[int, list[int]]] = []
    by_id: dict[int, Gate] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for item in line[1:].split():
                k, sep, v = item.partition("=")
                if sep:
                    meta[k] = v
            continue
        head, _, tail = line.partition(";")
        toks = head.split()
        if toks[0] == "MOVE" and len(toks) == 2:
            steps.append((int(toks[1]), []))
            continue
        if toks[0] != "GATE" or not steps:
            raise ValueError(f"malformed schedule line {lineno}: {line!r}")
        attrs = dict(item.split("=", 1) for item in tail.split())
        kind = toks[1]
        rest = toks[2:]
        angle = None
        if kind in ("RX", "RY", "RZ", "XX"):
            angle, rest = float(rest[0]), rest[1:]
        idx = int(attrs["id"])
        by_id[idx] = Gate(kind, tuple(int(t) for t in rest), angle, attrs.get("inserted") == "1")
        steps[-1][1].append(idx)
    n_ions, head_size = int(meta["n_ions"]), int(meta["head_size"])
    if sorted(by_id) != list(range(len(by_id))):
        raise ValueError("schedule gate ids are not contiguous")
    circuit = build_dag([by_id[i] for i in range(len(by_id))], n_ions)
    routed = RoutedCircuit(
        circuit=circuit,
        swap_count=int(meta["swaps"]),
        opposing_swap_count=int(meta["opposing"]),
        initial_mapping=Mapping(int(x) for x in meta["initial_mapping"].split(",")),
        final_mapping=Mapping(int(x) for x in meta["final_mapping"].split(",")),
        head_size=head_size,
    )
    sched = Schedule(tuple((p, tuple(b)) for p, b in steps), n_ions, head_size)
    return routed, sched


def write_atomic(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def write_artifacts(result: CompileResult, out_dir) -> None:
    out = Path(out_dir)
    write_atomic(out / "schedule.txt", format_schedule(result))
    write_atomic(out / "report.json", report_json(result))
    write_atomic(out / "routed.lqasm", dumps(result.routed.circuit, header="routed for a TILT tape; operands are ion indices"))
