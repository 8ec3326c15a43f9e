"""Batch experiment harness: DP versus exact optimum over random chains.

For every generated chain and every machine count the harness records
the scheduled DP makespan, the branch-and-bound optimum, their exact
rational ratio and the number of useful machines.  Aggregation keeps
rational arithmetic throughout so that counting how often the DP hits
the optimum never depends on floating-point comparisons.
"""

from __future__ import annotations

import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .bnb import BnBConfig, BnBResult, BnBStatus, ratio, solve_exact, useful_machines
from .chain import JacobianChain, MachineConfig
from .dp import Mode, SolverVariant, solve_scheduled
from .generator import GeneratorConfig, generate_many


@dataclass(frozen=True)
class BenchRecord:
    instance: int
    q: int
    m: int
    fma_dp: int
    fma_opt: int
    proven: bool
    ratio: Fraction
    useful_machines: int

    @property
    def status(self) -> str:
        return "proven" if self.proven else "budget_exhausted"


@dataclass(frozen=True)
class BenchSettings:
    """Solver settings shared by every record of a batch."""

    mode: Mode = Mode.MATRIX_FREE
    memory_limit: int = 0
    memory_model: str = "distributed"
    budget: float = 0.0


def _solve_instance(
    args: tuple[int, JacobianChain, Sequence[int], BenchSettings]
) -> list[BenchRecord]:
    instance, chain, machines, settings = args
    records = []
    for m in machines:
        config = MachineConfig(
            machines=m, memory_limit=settings.memory_limit, memory_model=settings.memory_model
        )
        table = solve_scheduled(chain, SolverVariant(settings.mode, scheduled=True), config)
        result: BnBResult = solve_exact(
            chain, BnBConfig(config=config, mode=settings.mode, budget=settings.budget)
        )
        m_useful = useful_machines(chain, config, settings.mode)
        records.append(
            BenchRecord(
                instance=instance,
                q=chain.q,
                m=m,
                fma_dp=table.root_cost,
                fma_opt=result.cost,
                proven=result.status is BnBStatus.PROVEN,
                ratio=ratio(result.cost, table.root_cost),
                useful_machines=m_useful,
            )
        )
    return records


def run_batch(
    gen_cfg: GeneratorConfig,
    machines: Sequence[int],
    count: int,
    settings: BenchSettings = BenchSettings(),
    jobs: int = 1,
    log=None,
) -> list[BenchRecord]:
    """Solve ``count`` random chains for every machine count.

    Records come back in (instance, machine) order and are a
    deterministic function of the generator seed, whatever ``jobs`` is.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    machines = list(machines)
    if not machines or any(m < 1 for m in machines):
        raise ValueError(f"machine counts must be positive, got {machines}")
    log = log if log is not None else sys.stderr
    chains = generate_many(gen_cfg, count)
    work = [(idx, chain, machines, settings) for idx, chain in enumerate(chains)]
    records: list[BenchRecord] = []

    def keep(idx: int, outcome) -> None:
        try:
            records.extend(outcome())
        except Exception as exc:  # a bad instance must not sink the batch
            print(f"instance {idx} failed: {exc}", file=log)
        _progress(log, idx + 1, count)

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_solve_instance, item) for item in work]
            for idx, future in enumerate(futures):
                keep(idx, future.result)
    else:
        for idx, item in enumerate(work):
            keep(idx, lambda item=item: _solve_instance(item))
    return records


def _progress(log, done: int, total: int) -> None:
    if done == total or done % 25 == 0:
        print(f"solved {done}/{total} instances", file=log)


@dataclass(frozen=True)
class AggregateCell:
    mean_ratio: Fraction
    min_ratio: Fraction
    percent_optimal: Fraction
    samples: int


def aggregate(records: Iterable[BenchRecord]) -> dict[tuple[int, int], AggregateCell]:
    """Per-(q, m) mean/min ratio and how often the DP found the optimum.

    Only proven records enter the statistics; a cell with no proven
    records is omitted.
    """
    buckets: dict[tuple[int, int], list[Fraction]] = {}
    for rec in records:
        if rec.proven:
            buckets.setdefault((rec.q, rec.m), []).append(rec.ratio)
    out = {}
    for key, ratios in sorted(buckets.items()):
        n = len(ratios)
        out[key] = AggregateCell(
            mean_ratio=sum(ratios, Fraction(0)) / n,
            min_ratio=min(ratios),
            percent_optimal=Fraction(100 * sum(1 for r in ratios if r == 1), n),
            samples=n,
        )
    return out


def format_mean(value: Fraction, digits: int = 3) -> str:
    """Render a ratio the way the result tables do: '1' or '.987'."""
    if value == 1:
        return "1"
    text = f"{float(value):.{digits}f}"
    return text[1:] if text.startswith("0.") else text


CSV_HEADER = "instance,q,m,fma_dp,fma_opt,status,ratio,useful_machines"


def write_csv(records: Sequence[BenchRecord], path) -> None:
    """One row per record under a fixed header; ratio with 6 decimals."""
    lines = [CSV_HEADER]
    for r in records:
        lines.append(
            f"{r.instance},{r.q},{r.m},{r.fma_dp},{r.fma_opt},"
            f"{r.status},{float(r.ratio):.6f},{r.useful_machines}"
        )
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path) -> list[BenchRecord]:
    """Parse a results file back into records.

    The exact ratio is reconstructed from the integer cost columns; the
    decimal ratio column is checked against it.
    """
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"unexpected CSV header: {lines[0] if lines else '<empty>'!r}")
    records = []
    for ln in lines[1:]:
        inst, q, m, dp, opt, status, dec, mu = ln.split(",")
        if status not in ("proven", "budget_exhausted"):
            raise ValueError(f"unknown status {status!r}")
        exact = Fraction(int(opt), int(dp))
        if f"{float(exact):.6f}" != dec:
            raise ValueError(f"ratio column {dec} does not match {opt}/{dp}")
        records.append(
            BenchRecord(
                instance=int(inst),
                q=int(q),
                m=int(m),
                fma_dp=int(dp),
                fma_opt=int(opt),
                proven=status == "proven",
                ratio=exact,
                useful_machines=int(mu),
            )
        )
    return records
