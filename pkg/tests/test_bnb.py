import random
from fractions import Fraction

import pytest

import oracles
from jacchain import (
    BnBConfig,
    BnBStatus,
    ElementalFunction,
    JacobianChain,
    MachineConfig,
    Mode,
    SolverVariant,
    accumulation_cost,
    evaluate_makespan,
    execute_numeric,
    ratio,
    solve_exact,
    solve_scheduled,
    useful_machines,
    validate,
)


def test_exact_q2_examples(small_chain):
    mf = solve_exact(small_chain, BnBConfig(MachineConfig(1), Mode.MATRIX_FREE))
    assert mf.cost == 60 and mf.proven
    dense = solve_exact(small_chain, BnBConfig(MachineConfig(2), Mode.DENSE))
    assert dense.cost == 64 and dense.proven


def test_exact_single_link():
    chain = JacobianChain([ElementalFunction(1, 5, 7, 100)])
    result = solve_exact(chain, BnBConfig(MachineConfig(3), Mode.MATRIX_FREE))
    assert result.cost == accumulation_cost(chain.link(1)) == 500
    assert result.proven
    assert len(result.sequence) == 1


def test_exact_matches_exhaustive_oracle():
    rng = random.Random(31)
    for _ in range(12):
        chain = oracles.random_chain(rng, rng.randint(2, 3), dims=(1, 5), edges=(3, 30))
        for mode in (Mode.DENSE, Mode.MATRIX_FREE):
            for m in range(1, chain.q + 1):
                result = solve_exact(chain, BnBConfig(MachineConfig(m), mode))
                assert result.proven
                expected = oracles.scheduled_optimum(chain, mode, m)
                assert result.cost == expected, (chain, mode, m)


def test_witness_sequence_is_consistent():
    rng = random.Random(37)
    for _ in range(15):
        chain = oracles.random_chain(rng, rng.randint(2, 5))
        m = rng.randint(1, chain.q)
        result = solve_exact(chain, BnBConfig(MachineConfig(m), Mode.MATRIX_FREE))
        assert validate(result.sequence, chain) == []
        assert evaluate_makespan(result.sequence, chain, m) == result.cost


def test_dominance_and_m_equals_q():
    rng = random.Random(41)
    for _ in range(15):
        chain = oracles.random_chain(rng, rng.randint(2, 5))
        for mode in (Mode.DENSE, Mode.MATRIX_FREE):
            for m in (2, chain.q):
                cfg = MachineConfig(machines=m)
                dp = solve_scheduled(chain, SolverVariant(mode, True), cfg).root_cost
                result = solve_exact(chain, BnBConfig(cfg, mode))
                assert result.proven
                assert result.cost <= dp
                if m == chain.q:
                    assert result.cost == dp


def test_optimum_monotone_in_machines():
    rng = random.Random(43)
    for _ in range(10):
        chain = oracles.random_chain(rng, rng.randint(2, 5))
        m_useful = useful_machines(chain, MachineConfig(chain.q), Mode.MATRIX_FREE)
        costs = []
        for m in range(1, chain.q + 1):
            result = solve_exact(chain, BnBConfig(MachineConfig(m), Mode.MATRIX_FREE))
            assert result.proven
            costs.append(result.cost)
        for prev, cur in zip(costs, costs[1:]):
            assert cur <= prev
        for m in range(m_useful, chain.q + 1):
            assert costs[m - 1] == costs[m_useful - 1]


def test_budget_exhaustion_is_reported():
    rng = random.Random(47)
    chain = oracles.random_chain(rng, 8, dims=(5, 50), edges=(1000, 10000))
    cfg = BnBConfig(MachineConfig(3), Mode.MATRIX_FREE, budget=0.05)
    result = solve_exact(chain, cfg)
    assert result.status is BnBStatus.BUDGET_EXHAUSTED
    # the incumbent is still a valid upper bound: at worst the DP solution
    dp = solve_scheduled(chain, SolverVariant(Mode.MATRIX_FREE, True), MachineConfig(3))
    assert result.cost <= dp.root_cost


def test_witness_executes_correct_jacobian():
    rng = random.Random(53)
    chain = oracles.random_chain(rng, 4, dims=(1, 4), edges=(2, 20))
    result = solve_exact(chain, BnBConfig(MachineConfig(2), Mode.MATRIX_FREE))
    mats = oracles.random_matrices(rng, chain)
    import numpy as np

    assert np.array_equal(
        execute_numeric(result.sequence, chain, mats), oracles.direct_product(mats)
    )


def test_ratio():
    assert ratio(60, 60) == 1
    assert ratio(9, 12) == Fraction(3, 4)
    with pytest.raises(ValueError):
        ratio(13, 12)
    with pytest.raises(ValueError):
        ratio(0, 12)


def test_ratio_respects_worst_case_bound():
    rng = random.Random(59)
    for _ in range(10):
        chain = oracles.random_chain(rng, rng.randint(2, 4))
        m = rng.randint(2, chain.q)
        cfg = MachineConfig(machines=m)
        dp = solve_scheduled(chain, SolverVariant(Mode.MATRIX_FREE, True), cfg).root_cost
        opt = solve_exact(chain, BnBConfig(cfg, Mode.MATRIX_FREE)).cost
        m_useful = useful_machines(chain, cfg, Mode.MATRIX_FREE)
        value = ratio(opt, dp)
        if min(m, m_useful) == 1:
            assert value == 1
        else:
            assert value > Fraction(1, min(m, m_useful))


def test_useful_machines_examples(small_chain):
    cfg = MachineConfig(machines=2)
    assert useful_machines(small_chain, cfg, Mode.MATRIX_FREE) == 1
    assert useful_machines(small_chain, cfg, Mode.DENSE) == 2
    single = JacobianChain([ElementalFunction(1, 5, 7, 100)])
    assert useful_machines(single, MachineConfig(1), Mode.MATRIX_FREE) == 1


def test_useful_machines_bounded_by_q():
    rng = random.Random(61)
    for _ in range(20):
        chain = oracles.random_chain(rng, rng.randint(1, 7))
        for mode in (Mode.DENSE, Mode.MATRIX_FREE):
            m_useful = useful_machines(chain, MachineConfig(chain.q), mode)
            assert 1 <= m_useful <= chain.q
