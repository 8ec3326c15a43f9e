"""Exact nested branch-and-bound over elimination sequences and schedules.

The outer search enumerates every recursive decomposition of the full
Jacobian into accumulation and elimination steps (the same alternative
set the DP considers); the inner search branches over dispatch decisions
(which ready task starts next, on which machine) and therefore covers
every schedule that could be optimal.  Both levels prune against the
incumbent, which starts out as the scheduled DP solution, so the result
is the certified global optimum whenever the search space is exhausted
within the time budget.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .chain import JacobianChain, MachineConfig, MemoryLimit, memory_limit_for, multiply_cost
from .dp import (
    Mode,
    SolverVariant,
    _accumulate,
    backtrack,
    count_leaf_machines,
    solve_scheduled,
    solve_unlimited,
)
from .sequence import EliminationSequence, EliminationStep, StepKind


class BnBStatus(enum.Enum):
    PROVEN = "proven"
    BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass(frozen=True)
class BnBConfig:
    """Search settings: machines and memory, cost variant, time budget."""

    config: MachineConfig
    mode: Mode = Mode.MATRIX_FREE
    budget: float = 0.0  # seconds; 0 means unlimited

    def __post_init__(self) -> None:
        if self.budget < 0:
            raise ValueError(f"budget must be >= 0, got {self.budget}")


@dataclass(frozen=True)
class BnBResult:
    cost: int
    sequence: EliminationSequence
    status: BnBStatus
    nodes: int

    @property
    def proven(self) -> bool:
        return self.status is BnBStatus.PROVEN


class _BudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class _TreeNode:
    kind: StepKind
    i: int
    j: int
    k: Optional[int]
    cost: int
    children: tuple["_TreeNode", ...]


def _postorder(node: _TreeNode) -> list[_TreeNode]:
    out: list[_TreeNode] = []

    def walk(n: _TreeNode) -> None:
        for c in n.children:
            walk(c)
        out.append(n)

    walk(node)
    return out


class _Search:
    """One branch-and-bound run; ``best`` tightens as solutions are found."""

    def __init__(self, chain: JacobianChain, cfg: BnBConfig, seed_cost: int, seed_seq) -> None:
        self.chain = chain
        self.machines = cfg.config.machines
        self.mode = cfg.mode
        # most permissive allocation: a task may in principle be granted
        # the whole pool, so its tape limit is the full-pool limit
        self.limit: MemoryLimit = (
            memory_limit_for(cfg.config, cfg.config.machines)
            if cfg.mode is Mode.LIMITED_MEMORY
            else None
        )
        self.nodes = 0
        self.deadline = time.monotonic() + cfg.budget if cfg.budget > 0 else None
        self.best = seed_cost
        self.best_seq: EliminationSequence = seed_seq
        # per-link lower bound: any step that covers link v sweeps its
        # edges at least once with a width no smaller than the smallest
        # interface dimension of the chain (dense: the exact ACC cost)
        if self.mode is Mode.DENSE:
            self.link_lb = [f.edges * min(f.n, f.m) for f in chain.elements]
        else:
            w_min = min(min(f.n, f.m) for f in chain.elements)
            self.link_lb = [f.edges * w_min for f in chain.elements]

    def _tick(self) -> None:
        self.nodes += 1
        if self.deadline is not None and self.nodes % 256 == 0:
            if time.monotonic() > self.deadline:
                raise _BudgetExceeded

    # -- outer search: decomposition trees ---------------------------------

    def _span_lb(self, j: int, i: int) -> int:
        return max(self.link_lb[i - 1 : j])

    def _trees(self, j: int, i: int, above: int) -> Iterator[_TreeNode]:
        """All decomposition trees for subchain i..j that could still beat
        the incumbent, given the committed ancestor path cost ``above``."""
        self._tick()
        if above + self._span_lb(j, i) >= self.best:
            return
        chain = self.chain
        if j == i:
            cost, decision = _accumulate(chain, j, self.limit)
            yield _TreeNode(decision.kind, i=j, j=j, k=None, cost=cost, children=())
            return
        matrix_free = self.mode is not Mode.DENSE
        for k in range(i, j):
            if matrix_free:
                tape = chain.edge_sum(i, k)
                if self.limit is None or tape <= self.limit:
                    c = chain.m(j) * tape
                    for child in self._trees(j, k + 1, above + c):
                        yield _TreeNode(StepKind.ELI_ADJ, i=i, j=j, k=k, cost=c, children=(child,))
                c = chain.n(i) * chain.edge_sum(k + 1, j)
                for child in self._trees(k, i, above + c):
                    yield _TreeNode(StepKind.ELI_TAN, i=i, j=j, k=k, cost=c, children=(child,))
            c = multiply_cost(chain.m(j), chain.m(k), chain.n(i))
            if above + c + max(self._span_lb(j, k + 1), self._span_lb(k, i)) >= self.best:
                continue
            for left in self._trees(j, k + 1, above + c):
                for right in self._trees(k, i, above + c):
                    yield _TreeNode(StepKind.ELI_MUL, i=i, j=j, k=k, cost=c, children=(left, right))

    # -- inner search: schedules -------------------------------------------

    def _schedule(self, tree: _TreeNode) -> None:
        """Try all dispatch orders and machine assignments for the task
        tree, updating the incumbent whenever a schedule beats it."""
        tasks = _postorder(tree)
        n = len(tasks)
        index = {id(t): ix for ix, t in enumerate(tasks)}
        preds = [tuple(index[id(c)] for c in t.children) for t in tasks]
        succ: list[Optional[int]] = [None] * n
        for ix, t in enumerate(tasks):
            for c in t.children:
                succ[index[id(c)]] = ix
        p = [t.cost for t in tasks]
        tail = [0] * n  # precedence path cost strictly above the task
        for ix in range(n - 2, -1, -1):
            s = succ[ix]
            assert s is not None
            tail[ix] = p[s] + tail[s]
        total = sum(p)
        crit = max(p[ix] + tail[ix] for ix in range(n))
        m = self.machines
        if max(crit, -(-total // m)) >= self.best:
            return

        comp = [0] * n
        done = [False] * n
        alpha = [0] * m
        dispatch: list[tuple[int, int, int]] = []

        def lower_bound() -> int:
            lb = max(alpha)
            amin = min(alpha)
            est = [0] * n
            for ix in range(n):
                if done[ix]:
                    est[ix] = comp[ix]
                    continue
                ready = max((est[px] for px in preds[ix]), default=0)
                est[ix] = max(ready, amin) + p[ix]
                follow = est[ix] + tail[ix]
                if follow > lb:
                    lb = follow
            return lb

        def dfs(scheduled: int) -> None:
            self._tick()
            if scheduled == n:
                makespan = max(comp)
                if makespan < self.best:
                    self.best = makespan
                    self.best_seq = self._witness(tasks, dispatch)
                return
            if lower_bound() >= self.best:
                return
            for ix in range(n):
                if done[ix] or not all(done[px] for px in preds[ix]):
                    continue
                r = max((comp[px] for px in preds[ix]), default=0)
                seen: set[int] = set()
                for mid in sorted(range(m), key=lambda it: (alpha[it], it)):
                    a = alpha[mid]
                    if a in seen:
                        continue  # identical machines are interchangeable
                    seen.add(a)
                    start = max(a, r)
                    if start + p[ix] + tail[ix] >= self.best:
                        continue
                    alpha[mid] = start + p[ix]
                    comp[ix] = start + p[ix]
                    done[ix] = True
                    dispatch.append((ix, mid, start))
                    dfs(scheduled + 1)
                    dispatch.pop()
                    done[ix] = False
                    comp[ix] = 0
                    alpha[mid] = a

        dfs(0)

    @staticmethod
    def _witness(tasks: list[_TreeNode], records: list[tuple[int, int, int]]) -> EliminationSequence:
        steps = []
        for ix, mid, _start in records:
            t = tasks[ix]
            steps.append(
                EliminationStep(t.kind, i=t.i, j=t.j, k=t.k, pool=(mid + 1, mid + 1), cost=t.cost)
            )
        return EliminationSequence(steps)

    def run(self) -> BnBStatus:
        try:
            for tree in self._trees(self.chain.q, 1, 0):
                self._schedule(tree)
            return BnBStatus.PROVEN
        except _BudgetExceeded:
            return BnBStatus.BUDGET_EXHAUSTED


def solve_exact(chain: JacobianChain, cfg: BnBConfig) -> BnBResult:
    """Certified minimal makespan over all sequences and schedules.

    The incumbent starts at the scheduled DP solution, so on budget
    exhaustion the result is still a valid upper bound with its witness
    sequence; the status says whether optimality was proven.
    """
    variant = SolverVariant(cfg.mode, scheduled=True)
    table = solve_scheduled(chain, variant, cfg.config)
    search = _Search(chain, cfg, seed_cost=table.root_cost, seed_seq=backtrack(table, chain))
    status = search.run()
    return BnBResult(cost=search.best, sequence=search.best_seq, status=status, nodes=search.nodes)


def ratio(fma_opt: int, fma_dp: int) -> Fraction:
    """Exact solution-quality ratio optimal/heuristic, always in (0, 1]."""
    if fma_opt <= 0 or fma_dp <= 0:
        raise ValueError(f"costs must be positive, got ({fma_opt}, {fma_dp})")
    if fma_opt > fma_dp:
        raise ValueError(
            f"optimal cost {fma_opt} exceeds heuristic cost {fma_dp}; "
            "the two must come from the same instance and machine count"
        )
    return Fraction(fma_opt, fma_dp)


def useful_machines(chain: JacobianChain, config: MachineConfig, mode: Mode) -> int:
    """Machines used by the optimal schedule with unlimited parallelism.

    This caps the achievable speedup: beyond it, extra machines cannot
    improve the optimum.
    """
    limit = memory_limit_for(config, config.machines) if mode is Mode.LIMITED_MEMORY else None
    table = solve_unlimited(chain, mode, limit)
    return count_leaf_machines(table)
