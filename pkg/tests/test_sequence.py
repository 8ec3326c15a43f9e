import random

import numpy as np
import pytest

import oracles
from jacchain import (
    ElementalFunction,
    EliminationSequence,
    EliminationStep,
    InfeasibleStepError,
    JacobianChain,
    StepKind,
    build_task_graph,
    evaluate_makespan,
    execute_numeric,
    export_dot,
    format_sequence,
    format_step,
    parse_sequence,
    parse_step,
    simulate_schedule,
    step_cost,
    validate,
)


def _chain6():
    """Any q=6 chain; graph-shape tests do not look at costs."""
    dims = [3, 4, 2, 5, 3, 4, 2]
    return JacobianChain(
        [
            ElementalFunction(i, dims[i - 1], dims[i], 10 * i)
            for i in range(1, 7)
        ]
    )


SIX_STEP_TEXT = """\
1: ACC TAN (4 5)
2: ELI TAN (4 5 6)
3: ACC ADJ (3 4)
4: ELI ADJ (1 3 4)
5: ELI MUL (1 4 6)
6: ELI ADJ (0 1 6)
"""

EIGHT_STEP_TEXT = """\
1: ACC TAN (4 5) [1]
2: ELI TAN (4 5 6) [1]
3: ACC ADJ (3 4) [2]
4: ELI ADJ (2 3 4) [2]
5: ACC TAN (1 2) [3]
6: ELI MUL (1 2 4) [2,3]
7: ELI ADJ (0 1 4) [2,3]
8: ELI MUL (0 4 6) [1,3]
"""


def test_step_validation():
    with pytest.raises(ValueError):
        EliminationStep(StepKind.ACC_TAN, i=1, j=2)
    with pytest.raises(ValueError):
        EliminationStep(StepKind.ELI_MUL, i=2, j=2, k=2)
    with pytest.raises(ValueError):
        EliminationStep(StepKind.ELI_ADJ, i=1, j=3, k=3)
    with pytest.raises(ValueError):
        EliminationStep(StepKind.ACC_TAN, i=1, j=1, pool=(2, 1))


def test_step_costs(small_chain):
    adj = EliminationStep(StepKind.ELI_ADJ, i=1, j=2, k=1)
    tan = EliminationStep(StepKind.ELI_TAN, i=1, j=2, k=1)
    mul = EliminationStep(StepKind.ELI_MUL, i=1, j=2, k=1)
    assert step_cost(adj, small_chain) == 20
    assert step_cost(tan, small_chain) == 60
    assert step_cost(mul, small_chain) == 24
    with pytest.raises(InfeasibleStepError):
        step_cost(adj, small_chain, limit=5)
    acc_adj = EliminationStep(StepKind.ACC_ADJ, i=2, j=2)
    assert step_cost(acc_adj, small_chain) == 40
    with pytest.raises(InfeasibleStepError):
        step_cost(acc_adj, small_chain, limit=19)


def test_six_step_task_graph():
    seq = parse_sequence(SIX_STEP_TEXT)
    graph = build_task_graph(seq)
    assert set(graph.edges) == {(1, 2), (2, 5), (3, 4), (4, 5), (5, 6)}
    assert graph.root == 6
    assert validate(seq, _chain6()) == []


def test_eight_step_task_graph():
    seq = parse_sequence(EIGHT_STEP_TEXT)
    graph = build_task_graph(seq)
    assert set(graph.edges) == {(1, 2), (2, 8), (3, 4), (4, 6), (5, 6), (6, 7), (7, 8)}
    assert graph.root == 8
    assert validate(seq, _chain6()) == []


def test_single_acc_graph():
    seq = EliminationSequence([EliminationStep(StepKind.ACC_TAN, i=1, j=1)])
    graph = build_task_graph(seq)
    assert graph.n_nodes == 1 and graph.edges == ()
    chain = JacobianChain([ElementalFunction(1, 2, 3, 5)])
    assert validate(seq, chain) == []


def test_validate_reports_missing_root():
    # drop the final elimination: the dangling product is F'(6,2), not F'(6,1)
    seq = parse_sequence("\n".join(SIX_STEP_TEXT.splitlines()[:-1]))
    problems = validate(seq, _chain6())
    assert any("root is not F'(6,1)" in p for p in problems)


def test_validate_reports_double_production():
    text = SIX_STEP_TEXT + "7: ACC TAN (0 1)\n8: ACC ADJ (0 1)"
    problems = validate(parse_sequence(text), _chain6())
    assert any("produced twice" in p for p in problems)


def test_validate_reports_multiple_dangling_products(small_chain):
    # two accumulations, nothing combines them: two roots, neither F'(2,1)
    seq = EliminationSequence(
        [
            EliminationStep(StepKind.ACC_TAN, i=1, j=1),
            EliminationStep(StepKind.ACC_TAN, i=2, j=2),
        ]
    )
    problems = validate(seq, small_chain)
    assert any("root is not F'(2,1)" in p for p in problems)
    assert any("never consumed" in p for p in problems)


def test_graph_rejects_double_consumption():
    steps = [
        EliminationStep(StepKind.ACC_TAN, i=1, j=1),
        EliminationStep(StepKind.ELI_TAN, i=1, j=2, k=1),
        EliminationStep(StepKind.ELI_TAN, i=1, j=3, k=1),
    ]
    with pytest.raises(ValueError, match="consumed by steps"):
        build_task_graph(EliminationSequence(steps))


def test_makespan_two_machine_join(small_chain):
    # A(p=2) and B(p=3) feed C(p=4); C waits for B: makespan 2+... = 7
    steps = [
        EliminationStep(StepKind.ACC_TAN, i=1, j=1, pool=(1, 1), cost=2),
        EliminationStep(StepKind.ACC_TAN, i=2, j=2, pool=(2, 2), cost=3),
        EliminationStep(StepKind.ELI_MUL, i=1, j=2, k=1, pool=(1, 1), cost=4),
    ]
    state = simulate_schedule(EliminationSequence(steps), small_chain, machines=2)
    assert state.starts == (0, 0, 3)
    assert state.completions == (2, 3, 7)
    assert state.assignment == (1, 2, 1)
    assert state.makespan == 7


def test_makespan_rejects_missing_machine(small_chain):
    steps = [
        EliminationStep(StepKind.ACC_TAN, i=1, j=1, pool=(3, 3)),
        EliminationStep(StepKind.ELI_TAN, i=1, j=2, k=1, pool=(1, 1)),
    ]
    with pytest.raises(ValueError, match="exceeds machine count"):
        evaluate_makespan(EliminationSequence(steps), small_chain, machines=2)


def test_execute_numeric_identity():
    chain = JacobianChain([ElementalFunction(i, 3, 3, 7) for i in range(1, 4)])
    seq = parse_sequence("1: ACC TAN (0 1)\n2: ELI TAN (0 1 2)\n3: ELI TAN (0 2 3)")
    eye = np.eye(3, dtype=int)
    assert np.array_equal(execute_numeric(seq, chain, [eye, eye, eye]), eye)


def test_execute_numeric_rank_one():
    chain = JacobianChain([ElementalFunction(1, 1, 2, 3), ElementalFunction(2, 2, 1, 3)])
    seq = parse_sequence("1: ACC TAN (1 2)\n2: ELI ADJ (0 1 2)")
    result = execute_numeric(seq, chain, [[[1], [2]], [[3, 4]]])
    assert result.tolist() == [[11]]


def test_execute_numeric_matches_direct_product():
    rng = random.Random(7)
    for _ in range(20):
        chain = oracles.random_chain(rng, rng.randint(2, 5), dims=(1, 4), edges=(1, 9))
        mats = oracles.random_matrices(rng, chain)
        text_steps = [f"{i}: ACC TAN ({i - 1} {i})" for i in range(1, chain.q + 1)]
        for j in range(2, chain.q + 1):
            text_steps.append(f"{chain.q + j - 1}: ELI MUL (0 {j - 1} {j})")
        seq = parse_sequence("\n".join(text_steps))
        assert validate(seq, chain) == []
        got = execute_numeric(seq, chain, mats)
        assert np.array_equal(got, oracles.direct_product(mats))


def test_execute_numeric_shape_check(small_chain):
    seq = parse_sequence("1: ACC TAN (1 2)\n2: ELI ADJ (0 1 2)")
    with pytest.raises(ValueError, match="shape"):
        execute_numeric(seq, small_chain, [np.zeros((4, 3), int), np.zeros((4, 2), int)])


def test_format_step_examples():
    assert format_step(EliminationStep(StepKind.ACC_ADJ, i=4, j=4, pool=(2, 2))) == "ACC ADJ (3 4) [2]"
    assert (
        format_step(EliminationStep(StepKind.ELI_MUL, i=1, j=6, k=4, pool=(1, 3)))
        == "ELI MUL (0 4 6) [1,3]"
    )
    assert format_step(EliminationStep(StepKind.ACC_TAN, i=1, j=1, pool=(1, 1))) == "ACC TAN (0 1) [1]"


def test_parser_round_trip():
    seq = parse_sequence(EIGHT_STEP_TEXT)
    assert parse_sequence(format_sequence(seq)) == seq
    # padded spacing, as in published listings, is accepted
    assert parse_step("3:  ACC ADJ   (3 4)   [2]") == EliminationStep(
        StepKind.ACC_ADJ, i=4, j=4, pool=(2, 2)
    )
    with pytest.raises(ValueError):
        parse_step("ELI MUL (0 4)")
    with pytest.raises(ValueError):
        parse_step("ACC TAN (2 4)")


def test_export_dot():
    seq = parse_sequence(SIX_STEP_TEXT)
    dot = export_dot(build_task_graph(seq), seq)
    lines = dot.strip().splitlines()
    assert lines[0] == "digraph elimination_sequence {"
    assert sum("label=" in ln for ln in lines) == 6
    assert sum("->" in ln for ln in lines) == 5
    assert '    1 [label="1: ACC TAN (4 5) [1]"];' in lines
    assert "    5 -> 6;" in lines

    single = EliminationSequence([EliminationStep(StepKind.ACC_TAN, i=1, j=1)])
    dot_single = export_dot(build_task_graph(single), single)
    assert "->" not in dot_single

    eight = parse_sequence(EIGHT_STEP_TEXT)
    dot8 = export_dot(build_task_graph(eight), eight)
    assert sum("label=" in ln for ln in dot8.splitlines()) == 8
    assert sum("->" in ln for ln in dot8.splitlines()) == 7
