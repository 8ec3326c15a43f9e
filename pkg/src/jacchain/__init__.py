"""Solvers for scheduling-aware Jacobian chain product bracketing."""

from .bench import (
    AggregateCell,
    BenchRecord,
    BenchSettings,
    aggregate,
    read_csv,
    run_batch,
    write_csv,
)
from .bnb import BnBConfig, BnBResult, BnBStatus, ratio, solve_exact, useful_machines
from .chain import (
    ElementalFunction,
    JacobianChain,
    MachineConfig,
    accumulation_cost,
    edge_sum,
    memory_limit_for,
    multiply_cost,
)
from .config import ConfigError, ConfigFile, load_config, parse_config
from .dp import (
    Decision,
    DPTable,
    Mode,
    SolverVariant,
    backtrack,
    solve_scheduled,
    solve_serial,
    solve_unlimited,
)
from .generator import GeneratorConfig, Pcg32, generate, generate_many
from .sequence import (
    EliminationSequence,
    EliminationStep,
    InfeasibleStepError,
    ScheduleState,
    StepKind,
    TaskGraph,
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

__all__ = [name for name in dir() if not name.startswith("_")]
