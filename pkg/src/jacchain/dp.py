"""Dynamic-programming solvers for chain bracketing, serial and scheduled.

Three cost variants exist: dense (accumulate every elemental Jacobian,
multiply), matrix-free (tangent/adjoint sweeps may replace products),
and limited-memory matrix-free (adjoint sweeps are barred when their
tape exceeds the memory limit).  The scheduled solver additionally
tracks how many machines each subproblem is granted and may split them
at a multiplication, which is the only step with two independent
operands; its table value is the predicted makespan.

Tie-breaking is deterministic throughout: smaller split index k first,
then adjoint sweep over tangent sweep over multiplication, then a
serial multiplication over a parallel one, then the smaller thread
split.  Accumulations prefer tangent mode when both modes cost the
same.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .chain import (
    JacobianChain,
    MachineConfig,
    MemoryLimit,
    accumulation_cost,
    memory_limit_for,
    multiply_cost,
)
from .sequence import EliminationSequence, EliminationStep, StepKind, step_cost


class Mode(enum.Enum):
    DENSE = "dense"
    MATRIX_FREE = "matrix-free"
    LIMITED_MEMORY = "limited-memory-matrix-free"


@dataclass(frozen=True)
class SolverVariant:
    mode: Mode
    scheduled: bool = False


@dataclass(frozen=True)
class Decision:
    """How a table cell attains its value.

    Diagonal cells carry an accumulation kind.  Off-diagonal cells carry
    an elimination kind and the split index k; multiplications also say
    whether the operands run serially (same machine pool) or in parallel
    with ``t_star`` machines granted to the (j, k+1) operand.
    """

    kind: StepKind
    k: Optional[int] = None
    parallel: bool = False
    t_star: Optional[int] = None


@dataclass
class DPTable:
    """Memoized costs and decisions for all subchains and thread counts.

    ``cells[(j, i, t)]`` holds (cost, decision) for computing the
    subchain Jacobian over links i..j with t machines; serial solves
    have t_max = 1.
    """

    q: int
    t_max: int
    variant: SolverVariant
    cells: dict[tuple[int, int, int], tuple[int, Decision]]

    def cost(self, j: int, i: int, t: int = 1) -> int:
        return self.cells[(j, i, t)][0]

    def decision(self, j: int, i: int, t: int = 1) -> Decision:
        return self.cells[(j, i, t)][1]

    @property
    def root_cost(self) -> int:
        return self.cost(self.q, 1, self.t_max)


def _accumulate(chain: JacobianChain, j: int, limit: MemoryLimit) -> tuple[int, Decision]:
    f = chain.link(j)
    if limit is not None and f.edges > limit:
        return f.edges * f.n, Decision(StepKind.ACC_TAN)
    if f.n <= f.m:
        return f.edges * f.n, Decision(StepKind.ACC_TAN)
    return f.edges * f.m, Decision(StepKind.ACC_ADJ)


def solve_serial(
    chain: JacobianChain, variant: SolverVariant, limit: MemoryLimit = None
) -> DPTable:
    """Optimal serial elimination cost for every subchain, O(q^3) cells.

    The memory limit only matters for the limited-memory variant; dense
    and matrix-free ignore it.
    """
    if variant.scheduled:
        raise ValueError("solve_serial requires a non-scheduled variant")
    mode = variant.mode
    eff = limit if mode is Mode.LIMITED_MEMORY else None
    matrix_free = mode is not Mode.DENSE
    q = chain.q
    cells: dict[tuple[int, int, int], tuple[int, Decision]] = {}
    for j in range(1, q + 1):
        cells[(j, j, 1)] = _accumulate(chain, j, eff)
    for span in range(2, q + 1):
        for i in range(1, q - span + 2):
            j = i + span - 1
            best: tuple[int, Decision] | None = None
            for k in range(i, j):
                options: list[tuple[int, Decision]] = []
                if matrix_free:
                    tape = chain.edge_sum(i, k)
                    if eff is None or tape <= eff:
                        options.append(
                            (
                                cells[(j, k + 1, 1)][0] + chain.m(j) * tape,
                                Decision(StepKind.ELI_ADJ, k=k),
                            )
                        )
                    options.append(
                        (
                            cells[(k, i, 1)][0] + chain.n(i) * chain.edge_sum(k + 1, j),
                            Decision(StepKind.ELI_TAN, k=k),
                        )
                    )
                options.append(
                    (
                        cells[(j, k + 1, 1)][0]
                        + cells[(k, i, 1)][0]
                        + multiply_cost(chain.m(j), chain.m(k), chain.n(i)),
                        Decision(StepKind.ELI_MUL, k=k),
                    )
                )
                for cand in options:
                    if best is None or cand[0] < best[0]:
                        best = cand
            assert best is not None
            cells[(j, i, 1)] = best
    return DPTable(q=q, t_max=1, variant=variant, cells=cells)


def solve_scheduled(
    chain: JacobianChain, variant: SolverVariant, config: MachineConfig
) -> DPTable:
    """Makespan-minimizing DP over subchains and granted machine counts.

    Cell (j, i, t) is the predicted makespan of computing subchain i..j
    on t machines.  Multiplications choose between running the two
    operands serially on the full pool and splitting the pool t* /
    t - t*; sweeps and accumulations pass the pool through unchanged.
    More machines than chain links are never useful, so t is capped at
    min(machines, q).
    """
    if not variant.scheduled:
        raise ValueError("solve_scheduled requires a scheduled variant")
    mode = variant.mode
    matrix_free = mode is not Mode.DENSE
    q = chain.q
    t_max = min(config.machines, q)
    cells: dict[tuple[int, int, int], tuple[int, Decision]] = {}
    for t in range(1, t_max + 1):
        eff = memory_limit_for(config, t) if mode is Mode.LIMITED_MEMORY else None
        for j in range(1, q + 1):
            cells[(j, j, t)] = _accumulate(chain, j, eff)
        for span in range(2, q + 1):
            for i in range(1, q - span + 2):
                j = i + span - 1
                best: tuple[int, Decision] | None = None
                for k in range(i, j):
                    options: list[tuple[int, Decision]] = []
                    if matrix_free:
                        tape = chain.edge_sum(i, k)
                        if eff is None or tape <= eff:
                            options.append(
                                (
                                    cells[(j, k + 1, t)][0] + chain.m(j) * tape,
                                    Decision(StepKind.ELI_ADJ, k=k),
                                )
                            )
                        options.append(
                            (
                                cells[(k, i, t)][0] + chain.n(i) * chain.edge_sum(k + 1, j),
                                Decision(StepKind.ELI_TAN, k=k),
                            )
                        )
                    mul = multiply_cost(chain.m(j), chain.m(k), chain.n(i))
                    options.append(
                        (
                            cells[(j, k + 1, t)][0] + cells[(k, i, t)][0] + mul,
                            Decision(StepKind.ELI_MUL, k=k),
                        )
                    )
                    for t_star in range(1, t):
                        options.append(
                            (
                                mul
                                + max(
                                    cells[(j, k + 1, t_star)][0],
                                    cells[(k, i, t - t_star)][0],
                                ),
                                Decision(StepKind.ELI_MUL, k=k, parallel=True, t_star=t_star),
                            )
                        )
                    for cand in options:
                        if best is None or cand[0] < best[0]:
                            best = cand
                assert best is not None
                cells[(j, i, t)] = best
    return DPTable(q=q, t_max=t_max, variant=variant, cells=cells)


def solve_unlimited(
    chain: JacobianChain, mode: Mode, limit: MemoryLimit = None
) -> DPTable:
    """Scheduled DP in the unlimited-machines reduction.

    With unboundedly many machines the thread split at a multiplication
    is irrelevant and the parallel term collapses to the plain maximum
    of the operand costs, so the table is two-dimensional again (stored
    at t = 1 here).  Its root is the best achievable makespan with
    unlimited parallelism.
    """
    matrix_free = mode is not Mode.DENSE
    eff = limit if mode is Mode.LIMITED_MEMORY else None
    q = chain.q
    cells: dict[tuple[int, int, int], tuple[int, Decision]] = {}
    for j in range(1, q + 1):
        cells[(j, j, 1)] = _accumulate(chain, j, eff)
    for span in range(2, q + 1):
        for i in range(1, q - span + 2):
            j = i + span - 1
            best: tuple[int, Decision] | None = None
            for k in range(i, j):
                options: list[tuple[int, Decision]] = []
                if matrix_free:
                    tape = chain.edge_sum(i, k)
                    if eff is None or tape <= eff:
                        options.append(
                            (
                                cells[(j, k + 1, 1)][0] + chain.m(j) * tape,
                                Decision(StepKind.ELI_ADJ, k=k),
                            )
                        )
                    options.append(
                        (
                            cells[(k, i, 1)][0] + chain.n(i) * chain.edge_sum(k + 1, j),
                            Decision(StepKind.ELI_TAN, k=k),
                        )
                    )
                options.append(
                    (
                        multiply_cost(chain.m(j), chain.m(k), chain.n(i))
                        + max(cells[(j, k + 1, 1)][0], cells[(k, i, 1)][0]),
                        Decision(StepKind.ELI_MUL, k=k, parallel=True),
                    )
                )
                for cand in options:
                    if best is None or cand[0] < best[0]:
                        best = cand
            assert best is not None
            cells[(j, i, 1)] = best
    return DPTable(q=q, t_max=1, variant=SolverVariant(mode, scheduled=True), cells=cells)


def backtrack(table: DPTable, chain: JacobianChain) -> EliminationSequence:
    """Reconstruct the elimination sequence with machine pools.

    Steps come out in postorder: for a multiplication, the (j, k+1)
    operand's subtree first, then the (k, i) operand's, then the step
    itself.  The root owns the pool [1, t_max]; a parallel split hands
    the first t* identifiers to the (j, k+1) operand and the remaining
    ones to the (k, i) operand, so pools always partition exactly.
    """
    steps: list[EliminationStep] = []

    def emit(j: int, i: int, t: int, lo: int, hi: int) -> None:
        decision = table.decision(j, i, t)
        kind = decision.kind
        if kind.is_acc:
            steps.append(EliminationStep(kind, i=j, j=j, pool=(lo, hi)))
            return
        k = decision.k
        assert k is not None
        if kind is StepKind.ELI_ADJ:
            emit(j, k + 1, t, lo, hi)
        elif kind is StepKind.ELI_TAN:
            emit(k, i, t, lo, hi)
        elif decision.parallel:
            assert decision.t_star is not None
            t_star = decision.t_star
            emit(j, k + 1, t_star, lo, lo + t_star - 1)
            emit(k, i, t - t_star, lo + t_star, hi)
        else:
            emit(j, k + 1, t, lo, hi)
            emit(k, i, t, lo, hi)
        steps.append(EliminationStep(kind, i=i, j=j, k=k, pool=(lo, hi)))

    emit(table.q, 1, table.t_max, 1, table.t_max)
    stamped = [
        EliminationStep(s.kind, i=s.i, j=s.j, k=s.k, pool=s.pool, cost=step_cost(s, chain))
        for s in steps
    ]
    return EliminationSequence(stamped)


def count_leaf_machines(table: DPTable) -> int:
    """Number of machines used by the unlimited-parallelism schedule.

    Every accumulation leaf of the backtracked tree runs on its own
    machine when parallelism is unbounded, so this is the leaf count of
    the decision tree rooted at (q, 1).
    """

    def leaves(j: int, i: int) -> int:
        decision = table.decision(j, i, 1)
        if decision.kind.is_acc:
            return 1
        k = decision.k
        assert k is not None
        if decision.kind is StepKind.ELI_ADJ:
            return leaves(j, k + 1)
        if decision.kind is StepKind.ELI_TAN:
            return leaves(k, i)
        return leaves(j, k + 1) + leaves(k, i)

    return leaves(table.q, 1)
