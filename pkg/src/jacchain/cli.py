"""Command-line entry points.

``jacchain-solve`` generates one chain from a config file, runs the
serial DP, the scheduled DP and the branch-and-bound solver, and prints
every solution with its predicted cost.  ``jacchain-batch`` runs the
statistical harness over many chains and writes the results CSV.

Exit codes: 0 success, 1 input error, 2 internal error.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from .bench import BenchSettings, aggregate, format_mean, run_batch, write_csv
from .bnb import BnBConfig, ratio, solve_exact, useful_machines
from .chain import MachineConfig, memory_limit_for
from .config import ConfigError, load_config
from .dp import Mode, SolverVariant, backtrack, solve_scheduled, solve_serial
from .generator import generate
from .sequence import build_task_graph, evaluate_makespan, export_dot, format_sequence


def _machine_config(cfg, machines: int, memory_model: str) -> MachineConfig:
    return MachineConfig(
        machines=machines, memory_limit=cfg.available_memory, memory_model=memory_model
    )


def _write_dot(directory: str, name: str, seq) -> None:
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, f"{name}.dot")
    with open(path, "w", encoding="ascii") as fh:
        fh.write(export_dot(build_task_graph(seq), seq, name=name))
    print(f"wrote {path}")


def cmd_solve(args) -> int:
    cfg = load_config(args.config)
    chain = generate(cfg.generator_config())
    mode = cfg.mode
    model = args.memory_model

    print("chain:")
    print(chain.to_text(), end="")

    serial_cfg = _machine_config(cfg, 1, model)
    serial = solve_serial(chain, SolverVariant(mode), memory_limit_for(serial_cfg, 1))
    serial_seq = backtrack(serial, chain)
    print(f"\nserial elimination sequence ({mode.value}):")
    print(format_sequence(serial_seq))
    print(f"predicted fma: {serial.root_cost}")

    threads = cfg.available_threads
    sched_cfg = _machine_config(cfg, threads, model)
    sched = solve_scheduled(chain, SolverVariant(mode, scheduled=True), sched_cfg)
    sched_seq = backtrack(sched, chain)
    print(f"\nscheduled elimination sequence ({threads} machine(s)):")
    print(format_sequence(sched_seq))
    print(f"predicted fma: {sched.root_cost}")
    step_limit = (
        (lambda s: memory_limit_for(sched_cfg, s.pool[1] - s.pool[0] + 1))
        if mode is Mode.LIMITED_MEMORY
        else None
    )
    makespan = evaluate_makespan(sched_seq, chain, threads, limit=step_limit)
    print(f"evaluated makespan: {makespan}")

    result = solve_exact(chain, BnBConfig(config=sched_cfg, mode=mode, budget=cfg.time_to_solve))
    print(f"\nbranch-and-bound ({result.status.value}, {result.nodes} nodes):")
    print(format_sequence(result.sequence))
    print(f"optimal fma: {result.cost}")
    quality = ratio(result.cost, sched.root_cost)
    print(f"ratio (optimal/dp): {float(quality):.6f}")
    print(f"useful machines: {useful_machines(chain, sched_cfg, mode)}")

    if args.dot:
        _write_dot(args.dot, "serial", serial_seq)
        _write_dot(args.dot, "scheduled", sched_seq)
        _write_dot(args.dot, "optimal", result.sequence)
    return 0


def cmd_batch(args) -> int:
    cfg = load_config(args.config)
    if args.machines:
        machines = args.machines
    else:
        machines = list(range(1, cfg.length + 1))
    if any(m < 1 for m in machines):
        raise ConfigError(f"machine counts must be positive: {machines}")
    settings = BenchSettings(
        mode=cfg.mode,
        memory_limit=cfg.available_memory,
        memory_model=args.memory_model,
        budget=cfg.time_to_solve,
    )
    records = run_batch(
        cfg.generator_config(), machines, args.count, settings=settings, jobs=args.jobs
    )
    write_csv(records, args.out)
    print(f"wrote {len(records)} records to {args.out}")
    missing = args.count * len(machines) - len(records)
    if missing:
        print(f"{missing} record(s) missing due to per-instance solver failures")

    table = aggregate(records)
    unproven = sum(1 for r in records if not r.proven)
    if unproven:
        print(f"excluded {unproven} budget-exhausted record(s) from the statistics")
    for title, pick in (
        ("average ratio", lambda c: format_mean(c.mean_ratio)),
        ("minimal ratio", lambda c: format_mean(c.min_ratio)),
        ("percent optimal", lambda c: _fmt_percent(c.percent_optimal)),
    ):
        print(f"\n{title} (rows q, columns m):")
        print("q\\m " + " ".join(f"{m:>7}" for m in machines))
        for q in sorted({key[0] for key in table}):
            cells = []
            for m in machines:
                cell = table.get((q, m))
                cells.append(f"{pick(cell):>7}" if cell else f"{'-':>7}")
            print(f"{q:>3} " + " ".join(cells))
    return 0


def _fmt_percent(value: Fraction) -> str:
    if value == int(value):
        return str(int(value))
    return f"{float(value):.1f}"


def _run(parser: argparse.ArgumentParser, command, argv) -> int:
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors; that is input error here
        return 0 if exc.code == 0 else 1
    try:
        return command(args)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 2


def main_solve(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="jacchain-solve",
        description="Solve one random Jacobian chain instance and print all solutions.",
    )
    parser.add_argument("config", help="configuration file")
    parser.add_argument("--dot", metavar="DIR", help="write task-graph DOT files to DIR")
    parser.add_argument(
        "--memory-model",
        choices=("distributed", "shared"),
        default="distributed",
        help="how the total memory is split among machines",
    )
    return _run(parser, cmd_solve, argv)


def main_batch(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="jacchain-batch",
        description="Benchmark the scheduled DP against the exact optimum over random chains.",
    )
    parser.add_argument("config", help="configuration file")
    parser.add_argument("--count", type=int, default=100, help="number of random chains")
    parser.add_argument("--out", default="results.csv", help="output CSV path")
    parser.add_argument(
        "--machines",
        type=lambda s: [int(x) for x in s.split(",")],
        default=None,
        help="comma-separated machine counts (default 1..length)",
    )
    parser.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    parser.add_argument(
        "--memory-model",
        choices=("distributed", "shared"),
        default="distributed",
        help="how the total memory is split among machines",
    )
    return _run(parser, cmd_batch, argv)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main_solve())
