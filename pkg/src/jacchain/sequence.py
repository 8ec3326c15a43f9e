"""Elimination sequences: steps, task graphs, schedules, and formats.

A sequence is an ordered list of accumulation and elimination steps that
together compute the full chain Jacobian.  Every intermediate Jacobian
is produced exactly once and consumed at most once, so the precedence
constraints between steps form an in-tree.  This module validates that
structure, simulates the schedule implied by the machine pools, executes
a sequence as exact integer linear algebra, and round-trips the textual
and DOT representations.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .chain import JacobianChain, MemoryLimit, multiply_cost


class StepKind(enum.Enum):
    ACC_TAN = "ACC TAN"
    ACC_ADJ = "ACC ADJ"
    ELI_TAN = "ELI TAN"
    ELI_ADJ = "ELI ADJ"
    ELI_MUL = "ELI MUL"

    @property
    def is_acc(self) -> bool:
        return self in (StepKind.ACC_TAN, StepKind.ACC_ADJ)


class InfeasibleStepError(ValueError):
    """An adjoint step whose tape does not fit in the memory limit."""


class SequenceFormatError(ValueError):
    """Malformed sequence text."""


@dataclass(frozen=True)
class EliminationStep:
    """One step: ACC of link i (=j), or ELI over span (i, k, j) with i <= k < j.

    ``pool`` is the contiguous machine-id range [lo, hi] granted to the
    step; the executing machine is the lowest id.  ``cost`` caches the
    step duration in fma units and is ignored for equality so parsed and
    solver-built steps compare equal.
    """

    kind: StepKind
    i: int
    j: int
    k: Optional[int] = None
    pool: tuple[int, int] = (1, 1)
    cost: Optional[int] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        lo, hi = self.pool
        if not 1 <= lo <= hi:
            raise ValueError(f"pool {self.pool} must satisfy 1 <= lo <= hi")
        if self.kind.is_acc:
            if self.i != self.j or self.k is not None:
                raise ValueError(f"ACC step must span one link, got {self}")
        else:
            if self.k is None or not self.i <= self.k < self.j:
                raise ValueError(f"ELI step needs i <= k < j, got {self}")

    @property
    def produces(self) -> tuple[int, int]:
        """Subchain span (j, i) of the Jacobian this step stores or sweeps into."""
        return (self.j, self.i)

    @property
    def consumes(self) -> tuple[tuple[int, int], ...]:
        """Spans of previously produced Jacobians this step uses."""
        if self.kind.is_acc:
            return ()
        assert self.k is not None
        if self.kind is StepKind.ELI_TAN:
            return ((self.k, self.i),)
        if self.kind is StepKind.ELI_ADJ:
            return ((self.j, self.k + 1),)
        return ((self.j, self.k + 1), (self.k, self.i))

    @property
    def machine(self) -> int:
        """Executing machine: lowest identifier in the pool."""
        return self.pool[0]


@dataclass(frozen=True)
class EliminationSequence:
    steps: tuple[EliminationStep, ...]

    def __init__(self, steps: Sequence[EliminationStep]) -> None:
        object.__setattr__(self, "steps", tuple(steps))

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def with_costs(self, chain: JacobianChain, limit: MemoryLimit = None) -> "EliminationSequence":
        return EliminationSequence(
            [replace(s, cost=step_cost(s, chain, limit)) for s in self.steps]
        )


def step_cost(step: EliminationStep, chain: JacobianChain, limit: MemoryLimit = None) -> int:
    """fma cost of a single step on the given chain.

    Adjoint steps record a tape over the swept links; if its size exceeds
    the limit the step is infeasible and InfeasibleStepError is raised.
    """
    i, j, k = step.i, step.j, step.k
    if not 1 <= i <= j <= chain.q:
        raise IndexError(f"step span ({i}, {j}) out of range for q={chain.q}")
    if step.kind is StepKind.ACC_TAN:
        return chain.edges(j) * chain.n(j)
    if step.kind is StepKind.ACC_ADJ:
        if limit is not None and chain.edges(j) > limit:
            raise InfeasibleStepError(
                f"ACC ADJ of link {j}: tape {chain.edges(j)} exceeds limit {limit}"
            )
        return chain.edges(j) * chain.m(j)
    assert k is not None
    if step.kind is StepKind.ELI_TAN:
        return chain.n(i) * chain.edge_sum(k + 1, j)
    if step.kind is StepKind.ELI_ADJ:
        tape = chain.edge_sum(i, k)
        if limit is not None and tape > limit:
            raise InfeasibleStepError(
                f"ELI ADJ over links {i}..{k}: tape {tape} exceeds limit {limit}"
            )
        return chain.m(j) * tape
    return multiply_cost(chain.m(j), chain.m(k), chain.n(i))


# ---------------------------------------------------------------------------
# Task graph


@dataclass(frozen=True)
class TaskGraph:
    """Precedence DAG over sequence steps; 1-based step numbers as nodes."""

    n_nodes: int
    edges: tuple[tuple[int, int], ...]

    def successors(self, node: int) -> tuple[int, ...]:
        return tuple(v for u, v in self.edges if u == node)

    def predecessors(self, node: int) -> tuple[int, ...]:
        return tuple(u for u, v in self.edges if v == node)

    @property
    def root(self) -> int:
        out = {u for u, _ in self.edges}
        roots = [n for n in range(1, self.n_nodes + 1) if n not in out]
        if len(roots) != 1:
            raise ValueError(f"graph has {len(roots)} roots, expected 1")
        return roots[0]


def build_task_graph(seq: EliminationSequence) -> TaskGraph:
    """Connect each produced Jacobian to the step that consumes it.

    Raises ValueError on double production, consumption of a span never
    produced, or a span consumed more than once (out-degree > 1).
    """
    producer: dict[tuple[int, int], int] = {}
    consumed: dict[tuple[int, int], int] = {}
    edges = []
    for num, step in enumerate(seq.steps, start=1):
        for span in step.consumes:
            if span not in producer:
                raise ValueError(f"step {num} consumes F'({span[0]},{span[1]}) which was never produced")
            if span in consumed:
                raise ValueError(
                    f"F'({span[0]},{span[1]}) consumed by steps {consumed[span]} and {num}"
                )
            consumed[span] = num
            edges.append((producer[span], num))
        span = step.produces
        if span in producer:
            raise ValueError(f"F'({span[0]},{span[1]}) produced twice (steps {producer[span]} and {num})")
        producer[span] = num
    return TaskGraph(n_nodes=len(seq), edges=tuple(sorted(edges)))


def validate(seq: EliminationSequence, chain: JacobianChain) -> list[str]:
    """Check the produce/consume discipline, spans and pools.

    Returns a list of human-readable violations; empty means the
    sequence is well-formed and its task graph is an in-tree rooted at
    the full Jacobian.
    """
    diagnostics: list[str] = []
    if not seq.steps:
        return ["sequence is empty"]
    for num, step in enumerate(seq.steps, start=1):
        if not 1 <= step.i <= step.j <= chain.q:
            diagnostics.append(f"step {num}: span ({step.i},{step.j}) out of range for q={chain.q}")
        lo, hi = step.pool
        if lo > hi or lo < 1:
            diagnostics.append(f"step {num}: empty or invalid pool {step.pool}")
    if diagnostics:
        return diagnostics
    try:
        graph = build_task_graph(seq)
    except ValueError as exc:
        return [str(exc)]
    produced = {s.produces for s in seq.steps}
    consumed = {span for s in seq.steps for span in s.consumes}
    root_span = (chain.q, 1)
    dangling = produced - consumed
    if dangling != {root_span}:
        extra = sorted(dangling - {root_span})
        if root_span not in produced or root_span in consumed:
            diagnostics.append(f"root is not F'({chain.q},1)")
        for span in extra:
            if span != root_span:
                diagnostics.append(f"F'({span[0]},{span[1]}) is produced but never consumed")
    if not diagnostics:
        root_step = seq.steps[graph.root - 1]
        if root_step.produces != root_span:
            diagnostics.append(f"root is not F'({chain.q},1)")
    return diagnostics


# ---------------------------------------------------------------------------
# Schedule simulation

#: Per-step memory limit: a fixed limit or a callable of the step.
LimitSpec = Union[MemoryLimit, Callable[[EliminationStep], MemoryLimit]]


@dataclass(frozen=True)
class ScheduleState:
    """Simulated start/completion times, assignments and machine availability."""

    starts: tuple[int, ...]
    completions: tuple[int, ...]
    assignment: tuple[int, ...]
    availability: tuple[int, ...]

    @property
    def makespan(self) -> int:
        return max(self.completions)


def _step_duration(step: EliminationStep, chain: JacobianChain, limit: LimitSpec) -> int:
    eff = limit(step) if callable(limit) else limit
    if step.cost is not None:
        # cached duration must still be tape-feasible
        step_cost(step, chain, eff)
        return step.cost
    return step_cost(step, chain, eff)


def simulate_schedule(
    seq: EliminationSequence,
    chain: JacobianChain,
    machines: int,
    limit: LimitSpec = None,
) -> ScheduleState:
    """Simulate non-preemptive execution of the sequence.

    Each step occupies its whole machine pool for its duration (the
    work runs on the lowest identifier; the rest of the pool is reserved
    for it, which is exactly the cost model under which the solvers
    predict makespans).  A step starts as soon as its pool is free and
    all of its predecessors have completed.
    """
    graph = build_task_graph(seq)
    avail = [0] * (machines + 1)  # 1-based
    starts: list[int] = []
    comps: list[int] = []
    assignment: list[int] = []
    for num, step in enumerate(seq.steps, start=1):
        lo, hi = step.pool
        if hi > machines:
            raise ValueError(f"step {num} pool {step.pool} exceeds machine count {machines}")
        ready = max((comps[p - 1] for p in graph.predecessors(num)), default=0)
        start = max(ready, max(avail[lo : hi + 1]))
        comp = start + _step_duration(step, chain, limit)
        for mid in range(lo, hi + 1):
            avail[mid] = comp
        starts.append(start)
        comps.append(comp)
        assignment.append(lo)
    return ScheduleState(
        starts=tuple(starts),
        completions=tuple(comps),
        assignment=tuple(assignment),
        availability=tuple(avail[1:]),
    )


def evaluate_makespan(
    seq: EliminationSequence,
    chain: JacobianChain,
    machines: int,
    limit: LimitSpec = None,
) -> int:
    """Makespan of the simulated schedule, in fma units."""
    return simulate_schedule(seq, chain, machines, limit).makespan


# ---------------------------------------------------------------------------
# Numeric execution


def execute_numeric(seq: EliminationSequence, chain: JacobianChain, entries) -> np.ndarray:
    """Interpret the sequence as exact linear algebra over integer matrices.

    ``entries[i-1]`` is the elemental Jacobian of link i with shape
    (m_i, n_i).  Arithmetic is done on object arrays (Python ints), so
    the result is exact whatever the magnitudes.  The returned matrix is
    the root Jacobian and must equal the plain chain product.
    """
    if len(entries) != chain.q:
        raise ValueError(f"expected {chain.q} matrices, got {len(entries)}")
    mats = []
    for idx, raw in enumerate(entries, start=1):
        a = np.asarray(raw, dtype=object)
        want = (chain.m(idx), chain.n(idx))
        if a.shape != want:
            raise ValueError(f"matrix {idx} has shape {a.shape}, expected {want}")
        mats.append(a)

    def product(hi: int, lo: int) -> np.ndarray:
        out = mats[hi - 1]
        for idx in range(hi - 1, lo - 1, -1):
            out = out @ mats[idx - 1]
        return out

    store: dict[tuple[int, int], np.ndarray] = {}
    for step in seq.steps:
        i, j, k = step.i, step.j, step.k
        if step.kind.is_acc:
            result = mats[j - 1]
        elif step.kind is StepKind.ELI_TAN:
            result = product(j, k + 1) @ store.pop((k, i))
        elif step.kind is StepKind.ELI_ADJ:
            result = store.pop((j, k + 1)) @ product(k, i)
        else:
            result = store.pop((j, k + 1)) @ store.pop((k, i))
        store[step.produces] = result
    return store[(chain.q, 1)]


# ---------------------------------------------------------------------------
# Text and DOT formats


def format_step(step: EliminationStep) -> str:
    """Canonical step text, e.g. "ELI MUL (0 4 6) [1,3]" or "ACC TAN (0 1) [1]"."""
    if step.kind.is_acc:
        span = f"({step.i - 1} {step.j})"
    else:
        span = f"({step.i - 1} {step.k} {step.j})"
    lo, hi = step.pool
    pool = f"[{lo}]" if lo == hi else f"[{lo},{hi}]"
    return f"{step.kind.value} {span} {pool}"


def format_sequence(seq: EliminationSequence) -> str:
    """One step per line, numbered "n: <step>"."""
    return "\n".join(f"{num}: {format_step(s)}" for num, s in enumerate(seq.steps, start=1))


_STEP_RE = re.compile(
    r"^\s*(?:(\d+)\s*:)?\s*"
    r"(ACC|ELI)\s+(TAN|ADJ|MUL)\s*"
    r"\(\s*(\d+)\s+(\d+)(?:\s+(\d+))?\s*\)"
    r"(?:\s*\[\s*(\d+)\s*(?:,\s*(\d+)\s*)?\])?\s*$"
)


def parse_step(line: str) -> EliminationStep:
    m = _STEP_RE.match(line)
    if not m:
        raise SequenceFormatError(f"cannot parse step line: {line!r}")
    _, family, mode, a, b, c, plo, phi = m.groups()
    kind = StepKind[f"{family}_{mode}"]
    lo = int(plo) if plo else 1
    hi = int(phi) if phi else lo
    if kind.is_acc:
        if c is not None:
            raise SequenceFormatError(f"ACC step takes a 2-number span: {line!r}")
        i = j = int(b)
        if int(a) != i - 1:
            raise SequenceFormatError(f"ACC span must be (i-1 i): {line!r}")
        return EliminationStep(kind, i=i, j=j, pool=(lo, hi))
    if c is None:
        raise SequenceFormatError(f"ELI step takes a 3-number span: {line!r}")
    return EliminationStep(kind, i=int(a) + 1, j=int(c), k=int(b), pool=(lo, hi))


def parse_sequence(text: str, chain: JacobianChain | None = None) -> EliminationSequence:
    """Parse sequence text (the format of :func:`format_sequence`).

    Step numbers and pools are optional on input; machine pools default
    to [1].  When a chain is supplied, step costs are filled in.
    """
    steps = [parse_step(ln) for ln in text.splitlines() if ln.strip()]
    seq = EliminationSequence(steps)
    if chain is not None:
        seq = seq.with_costs(chain)
    return seq


def export_dot(graph: TaskGraph, seq: EliminationSequence, name: str = "elimination_sequence") -> str:
    """DOT text with one node per step (labelled with its formatted text)
    and one edge per precedence constraint, in stable order."""
    lines = [f"digraph {name} {{"]
    for num, step in enumerate(seq.steps, start=1):
        lines.append(f'    {num} [label="{num}: {format_step(step)}"];')
    for u, v in graph.edges:
        lines.append(f"    {u} -> {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
