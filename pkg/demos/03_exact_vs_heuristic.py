"""How close does the scheduled DP heuristic get to the global optimum?

For a handful of random chains we compute the DP makespan, the certified
optimum from the branch-and-bound search, their ratio, and the number of
"useful" machines: the machine count beyond which even the optimum
cannot improve.  The ratio is always above 1/min(m, useful).
"""

from fractions import Fraction

from jacchain import (
    BnBConfig,
    GeneratorConfig,
    MachineConfig,
    Mode,
    SolverVariant,
    generate_many,
    ratio,
    solve_exact,
    solve_scheduled,
    useful_machines,
)

MACHINES = 2
chains = generate_many(
    GeneratorConfig(length=5, size_range=(5, 50), dag_size_range=(1000, 10000), seed=8821),
    count=8,
)

print(f"q=5 chains on m={MACHINES} machines")
print(f"{'dp':>10} {'optimal':>10} {'ratio':>8} {'useful':>7} {'bound':>7}")
for chain in chains:
    cfg = MachineConfig(machines=MACHINES)
    dp = solve_scheduled(chain, SolverVariant(Mode.MATRIX_FREE, True), cfg).root_cost
    result = solve_exact(chain, BnBConfig(cfg, Mode.MATRIX_FREE, budget=5.0))
    assert result.proven
    m_useful = useful_machines(chain, cfg, Mode.MATRIX_FREE)
    quality = ratio(result.cost, dp)
    floor = Fraction(1, min(MACHINES, m_useful))
    assert quality == 1 if floor == 1 else quality > floor
    print(
        f"{dp:>10} {result.cost:>10} {float(quality):>8.4f} {m_useful:>7} {float(floor):>7.2f}"
    )

print("\nratio 1 means the heuristic found a provably optimal schedule.")
