"""Search-based test-data generation laboratory.

Generates benchmark programs of controlled size by grammatical evolution,
runs GA and random test search against them with coverage instrumentation,
and summarizes GA-vs-random comparisons with Welch t-tests.
"""

from sbstlab._core import (
    CellSummary,
    CoverageReport,
    Domain,
    EvolvedProgram,
    ExecLimits,
    ExperimentPlan,
    ExperimentResult,
    GaConfig,
    GeConfig,
    Metrics,
    Program,
    ProgramResult,
    RandomConfig,
    SearchOutcome,
    SuiteChromosome,
    TargetSpec,
    TraceResult,
    TTestResult,
    branch_distance,
    compute_metrics,
    evolve_programs,
    execute,
    incomplete_beta,
    load_run_dir,
    map_genotype,
    mean_stdev,
    parse,
    plan_from_text,
    render,
    run_experiment,
    run_ga,
    run_random,
    run_suite,
    student_t_p_two_sided,
    suite_fitness,
    validate,
    welch_t_test,
    write_run_dir,
)

__all__ = [
    "CellSummary",
    "CoverageReport",
    "Domain",
    "EvolvedProgram",
    "ExecLimits",
    "ExperimentPlan",
    "ExperimentResult",
    "GaConfig",
    "GeConfig",
    "Metrics",
    "Program",
    "ProgramResult",
    "RandomConfig",
    "SearchOutcome",
    "SuiteChromosome",
    "TargetSpec",
    "TraceResult",
    "TTestResult",
    "branch_distance",
    "compute_metrics",
    "evolve_programs",
    "execute",
    "incomplete_beta",
    "load_run_dir",
    "map_genotype",
    "mean_stdev",
    "parse",
    "plan_from_text",
    "render",
    "run_experiment",
    "run_ga",
    "run_random",
    "run_suite",
    "student_t_p_two_sided",
    "suite_fitness",
    "validate",
    "welch_t_test",
    "write_run_dir",
]
