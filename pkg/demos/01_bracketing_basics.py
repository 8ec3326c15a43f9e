"""Serial bracketing on a tiny worked example.

A chain of two linear maps, F1: R^3 -> R^4 with a 10-edge DAG and
F2: R^4 -> R^2 with a 20-edge DAG.  We compare the dense solver, which
must accumulate both Jacobians and multiply them, with the matrix-free
solver, which may sweep one preaccumulated Jacobian through the other
map's tangent or adjoint model instead.
"""

from jacchain import (
    ElementalFunction,
    JacobianChain,
    Mode,
    SolverVariant,
    backtrack,
    format_sequence,
    solve_serial,
)

chain = JacobianChain(
    [
        ElementalFunction(index=1, n=3, m=4, edges=10),
        ElementalFunction(index=2, n=4, m=2, edges=20),
    ]
)
print("chain:")
print(chain.to_text())

# Dense: accumulate F1' (min(3,4)*10 = 30 fma), accumulate F2'
# (min(4,2)*20 = 40 fma), then multiply (2*4*3 = 24 fma).
dense = solve_serial(chain, SolverVariant(Mode.DENSE))
print(f"dense optimum: {dense.root_cost} fma  (30 + 40 + 24)")
print(format_sequence(backtrack(dense, chain)))

# Matrix-free: accumulate F2' (40 fma) and sweep it through the adjoint
# model of F1 (2 rows * 10 edges = 20 fma).  No multiplication at all.
mf = solve_serial(chain, SolverVariant(Mode.MATRIX_FREE))
print(f"\nmatrix-free optimum: {mf.root_cost} fma  (40 + 20)")
print(format_sequence(backtrack(mf, chain)))

# Every subchain cost is available in the table, not just the root.
print("\nfull matrix-free table:")
for j in range(1, chain.q + 1):
    for i in range(1, j + 1):
        print(f"  cost of F'({j},{i}) = {mf.cost(j, i)}")
