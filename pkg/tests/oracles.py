"""Independent brute-force oracles used to pin expected values.

These deliberately avoid the production solvers' machinery: serial
costs come from explicit enumeration of every step tree, scheduled
makespans from enumerating dispatch permutations and machine
assignments, and numeric results from the plain chain product.
"""

from __future__ import annotations

import itertools
import random
from functools import reduce

import numpy as np

from jacchain import JacobianChain, ElementalFunction, Mode


def serial_optimum(chain: JacobianChain, mode: Mode, limit=None) -> int:
    """Minimal serial fma over all elimination sequences, by enumeration."""
    return min(serial_costs(chain, chain.q, 1, mode, limit))


def serial_costs(chain, j, i, mode, limit):
    f = chain.link(j)
    if j == i:
        yield f.edges * f.n
        if limit is None or f.edges <= limit:
            yield f.edges * f.m
        return
    matrix_free = mode is not Mode.DENSE
    for k in range(i, j):
        if matrix_free:
            tape = chain.edge_sum(i, k)
            if limit is None or tape <= limit:
                for c in serial_costs(chain, j, k + 1, mode, limit):
                    yield c + chain.m(j) * tape
            sweep = chain.n(i) * chain.edge_sum(k + 1, j)
            for c in serial_costs(chain, k, i, mode, limit):
                yield c + sweep
        mul = chain.m(j) * chain.m(k) * chain.n(i)
        for a in serial_costs(chain, j, k + 1, mode, limit):
            for b in serial_costs(chain, k, i, mode, limit):
                yield a + b + mul


def task_trees(chain, j, i, mode, limit=None):
    """All step trees as (duration, children) nested tuples."""
    f = chain.link(j)
    if j == i:
        yield (f.edges * f.n, ())
        if limit is None or f.edges <= limit:
            yield (f.edges * f.m, ())
        return
    matrix_free = mode is not Mode.DENSE
    for k in range(i, j):
        if matrix_free:
            tape = chain.edge_sum(i, k)
            if limit is None or tape <= limit:
                for child in task_trees(chain, j, k + 1, mode, limit):
                    yield (chain.m(j) * tape, (child,))
            sweep = chain.n(i) * chain.edge_sum(k + 1, j)
            for child in task_trees(chain, k, i, mode, limit):
                yield (sweep, (child,))
        mul = chain.m(j) * chain.m(k) * chain.n(i)
        for a in task_trees(chain, j, k + 1, mode, limit):
            for b in task_trees(chain, k, i, mode, limit):
                yield (mul, (a, b))


def _flatten(tree):
    """Postorder (duration, predecessor indices) task list."""
    tasks = []

    def walk(node):
        dur, children = node
        pred = tuple(walk(c) for c in children)
        tasks.append((dur, pred))
        return len(tasks) - 1

    walk(tree)
    return tasks


def _tree_makespan(tasks, machines) -> int:
    """Exact minimal makespan by enumerating dispatch orders x assignments."""
    n = len(tasks)
    best = sum(d for d, _ in tasks)
    orders = [
        perm
        for perm in itertools.permutations(range(n))
        if all(all(perm.index(p) < pos for p in tasks[t][1]) for pos, t in enumerate(perm))
    ]
    for order in orders:
        for assign in itertools.product(range(machines), repeat=n):
            alpha = [0] * machines
            comp = [0] * n
            for t in order:
                dur, preds = tasks[t]
                start = max([alpha[assign[t]]] + [comp[p] for p in preds])
                comp[t] = start + dur
                alpha[assign[t]] = comp[t]
            best = min(best, max(comp))
    return best


def scheduled_optimum(chain: JacobianChain, mode: Mode, machines: int, limit=None) -> int:
    """Minimal makespan over all sequences and schedules, by enumeration.

    Exponential in every direction; intended for q <= 3.
    """
    return min(
        _tree_makespan(_flatten(tree), machines)
        for tree in task_trees(chain, chain.q, 1, mode, limit)
    )


def direct_product(mats) -> np.ndarray:
    """The chain Jacobian computed the obvious way: one big product."""
    as_obj = [np.asarray(m, dtype=object) for m in mats]
    return reduce(lambda acc, m: m @ acc, as_obj)


def random_chain(rng: random.Random, q: int, dims=(2, 8), edges=(10, 100)) -> JacobianChain:
    out_dims = [rng.randint(*dims) for _ in range(q + 1)]
    return JacobianChain(
        [
            ElementalFunction(
                index=i, n=out_dims[i - 1], m=out_dims[i], edges=rng.randint(*edges)
            )
            for i in range(1, q + 1)
        ]
    )


def random_matrices(rng: random.Random, chain: JacobianChain, span=3):
    return [
        [[rng.randint(-span, span) for _ in range(chain.n(i))] for _ in range(chain.m(i))]
        for i in range(1, chain.q + 1)
    ]
