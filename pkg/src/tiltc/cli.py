"""Command-line driver: ``tiltc compile|sweep|gen|replay``.

Exit codes: 0 success, 2 input error, 3 capacity/contract error,
4 internal invariant failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .bench import BenchmarkSpec, GeneratorError, generate
from .circuit import ContractViolation
from .frontend import decompose, parse
from .oracle import replay_check
from .pipeline import (
    ConfigError,
    InvariantFailure,
    compile_circuit,
    metrics,
    parse_device,
    read_schedule,
    report_json,
    write_artifacts,
    write_atomic,
)
from .router import CapacityError

EXIT_OK, EXIT_INPUT, EXIT_CAPACITY, EXIT_INVARIANT = 0, 2, 3, 4


def worker_count() -> int:
    raw = os.environ.get("LINQ_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _read(path) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load(args):
    circuit = decompose(parse(_read(args.circuit)))
    dev = parse_device(_read(args.device))
    if getattr(args, "max_swap_len", None) is not None:
        dev = dev.with_max_swap_len(args.max_swap_len)
    return circuit, dev


def cmd_compile(args) -> int:
    circuit, dev = _load(args)
    result = compile_circuit(circuit, dev)
    write_artifacts(result, args.out)
    if args.json:
        sys.stdout.write(report_json(result))
    return EXIT_OK


def parse_range(text: str) -> range:
    for sep in ("..", ":"):
        if sep in text:
            lo, hi = text.split(sep, 1)
            return range(int(lo), int(hi) + 1)
    v = int(text)
    return range(v, v + 1)


def _sweep_point(job):
    circuit, dev, msl = job
    m = metrics(compile_circuit(circuit, dev.with_max_swap_len(msl)))
    return msl, m["swap_count"], m["move_count"], m["success_rate"], m["t_exec_s"]


def sweep_rows(circuit, dev, values, workers: int = 1) -> list[dict]:
    """Compile once per max_swap_len; mark the best success rate (smallest value on ties)."""
    jobs = [(circuit, dev, v) for v in values]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            points = list(pool.map(_sweep_point, jobs))
    else:
        points = [_sweep_point(j) for j in jobs]
    rows = [
        {"max_swap_len": v, "swaps": s, "moves": m, "success_rate": f, "t_exec": t, "best": 0}
        for v, s, m, f, t in points
    ]
    if rows:
        top = max(float(f"{r['success_rate']:.12g}") for r in rows)
        for r in rows:
            if float(f"{r['success_rate']:.12g}") == top:
                r["best"] = 1
                break
    return rows


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = ["max_swap_len", "swaps", "moves", "success_rate", "t_exec", "best"]
    w.writerow(cols)
    for r in rows:
        w.writerow([repr(r[c]) if isinstance(r[c], float) else r[c] for c in cols])
    return buf.getvalue()


def cmd_sweep(args) -> int:
    circuit, dev = _load(args)
    hi = max(2, dev.head_size - 1)
    values = parse_range(args.range) if args.range else range(2, hi + 1)
    if not values or values.start < 2 or values.stop - 1 > hi:
        raise ConfigError(f"sweep range must lie within [2, {hi}]")
    rows = sweep_rows(circuit, dev, values, worker_count())
    text = rows_to_csv(rows)
    if args.out:
        write_atomic(Path(args.out), text)
    else:
        sys.stdout.write(text)
    if args.json:
        sys.stdout.write(json.dumps(rows, indent=2) + "\n")
    return EXIT_OK


def _parse_params(items) -> dict:
    extra = {}
    for item in items or []:
        k, sep, v = item.partition("=")
        if not sep:
            raise GeneratorError(f"--param expects key=value, got {item!r}")
        try:
            extra[k] = int(v)
        except ValueError:
            try:
                extra[k] = float(v)
            except ValueError:
                extra[k] = v
    return extra


def cmd_gen(args) -> int:
    spec = BenchmarkSpec(args.family.upper(), args.n, args.seed, _parse_params(args.param))
    text = generate(spec)
    if args.out:
        write_atomic(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_replay(args) -> int:
    circuit = decompose(parse(_read(args.circuit)))
    routed, sched = read_schedule(_read(args.schedule))
    verdict = replay_check(circuit, routed, sched)
    print("PASS" if verdict else f"FAIL: {verdict.message}")
    return EXIT_OK if verdict else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tiltc", description="Compile and simulate circuits on a linear-tape ion trap.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compile", help="map, route, schedule, and price a circuit")
    c.add_argument("circuit")
    c.add_argument("--device", required=True)
    c.add_argument("--out", required=True)
    c.add_argument("--max-swap-len", type=int)
    c.add_argument("--json", action="store_true", help="also print report.json to stdout")
    c.set_defaults(func=cmd_compile)

    s = sub.add_parser("sweep", help="compile once per max swap length")
    s.add_argument("circuit")
    s.add_argument("--device", required=True)
    s.add_argument("--range", help="inclusive range such as 3..7 (default 2..L-1)")
    s.add_argument("--out", help="CSV path (default stdout)")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_sweep)

    g = sub.add_parser("gen", help="emit a benchmark circuit")
    g.add_argument("family")
    g.add_argument("n", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--param", action="append", metavar="KEY=VALUE")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("replay", help="validate a schedule.txt against its source circuit")
    r.add_argument("circuit")
    r.add_argument("schedule")
    r.set_defaults(func=cmd_replay)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CapacityError, ContractViolation) as exc:
        print(f"tiltc: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except InvariantFailure as exc:
        print(f"tiltc: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, KeyError, OSError) as exc:
        # parse, config, generator and malformed-circuit errors are all ValueErrors
        print(f"tiltc: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
