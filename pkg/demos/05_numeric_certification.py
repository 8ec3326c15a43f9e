"""Certifying sequences numerically: every solver output computes the
same Jacobian as the plain chain product.

We draw small integer matrices for each elemental Jacobian, execute the
solver sequences step by step with exact integer arithmetic, and compare
against multiplying the chain out directly.
"""

import random

import numpy as np

from jacchain import (
    BnBConfig,
    ElementalFunction,
    JacobianChain,
    MachineConfig,
    Mode,
    SolverVariant,
    backtrack,
    execute_numeric,
    format_sequence,
    solve_exact,
    solve_scheduled,
)

rng = random.Random(99)
dims = [rng.randint(1, 5) for _ in range(5)]
chain = JacobianChain(
    [
        ElementalFunction(i, dims[i - 1], dims[i], rng.randint(2, 30))
        for i in range(1, 5)
    ]
)
matrices = [
    np.array([[rng.randint(-3, 3) for _ in range(chain.n(i))] for _ in range(chain.m(i))])
    for i in range(1, chain.q + 1)
]

direct = matrices[-1]
for mat in reversed(matrices[:-1]):
    direct = direct @ mat
print("direct product:")
print(direct)

cfg = MachineConfig(machines=2)
dp_seq = backtrack(solve_scheduled(chain, SolverVariant(Mode.MATRIX_FREE, True), cfg), chain)
bnb_seq = solve_exact(chain, BnBConfig(cfg, Mode.MATRIX_FREE)).sequence

for name, seq in (("scheduled DP", dp_seq), ("branch-and-bound", bnb_seq)):
    result = execute_numeric(seq, chain, matrices)
    assert np.array_equal(result, direct)
    print(f"\n{name} sequence reproduces it exactly:")
    print(format_sequence(seq))
