"""Smoke tests for the python bindings."""

import math

import pytest

import sbstlab

NEEDLE = """program needle(x0)
{
  if (x0 >= 10) {
    v0 = 1;
    v1 = 2;
  }
}
"""


def test_parse_render_roundtrip():
    program = sbstlab.parse(NEEDLE)
    assert program.input_arity == 1
    assert sbstlab.render(program) == NEEDLE
    metrics = program.metrics()
    assert (metrics.statements, metrics.branches, metrics.loops) == (2, 1, 0)
    assert sbstlab.validate(program) == []


def test_parse_rejects_division():
    with pytest.raises(Exception, match="[0-9]+:[0-9]+"):
        sbstlab.parse("program t(x0)\n{\n  v0 = x0 / 2;\n}\n")


def test_branch_distance_example():
    # if (x >= z + 10) with x=10, z=5: distance 5 toward true
    assert sbstlab.branch_distance(">=", 10, 15, True) == 5
    assert sbstlab.branch_distance(">=", 20, 15, True) == 0
    assert sbstlab.branch_distance("==", 7, 3, True) == 4
    assert sbstlab.branch_distance("==", 7, 3, False) == 0


def test_execute_and_run_suite():
    program = sbstlab.parse(NEEDLE)
    trace = sbstlab.execute(program, [20])
    assert trace.termination == "normal"
    assert trace.executed_stmt_ids == [1, 2]
    assert (0, True) in trace.covered_outcomes
    assert trace.min_distance(0, True) == 0

    report = sbstlab.run_suite(program, [[20], [0]])
    assert report.statement_pct == 100.0
    assert report.branch_pct == 100.0

    near = sbstlab.run_suite(program, [[7]])
    assert near.branch_pct == 50.0


def test_suite_fitness_worked_example():
    program = sbstlab.parse(NEEDLE)
    suite = sbstlab.SuiteChromosome([[7]])
    fitness = sbstlab.suite_fitness(program, suite, "statement")
    assert math.isclose(fitness, 0.4, abs_tol=1e-12)


def test_evolution_hits_target_and_is_deterministic():
    cfg = sbstlab.GeConfig()
    cfg.population_size = 30
    cfg.generations = 100
    cfg.initial_chromosome_size = 300
    cfg.target = sbstlab.TargetSpec("statements", 15)
    cfg.input_arity = 2
    cfg.seed = 5
    first = sbstlab.evolve_programs(cfg, 1)
    second = sbstlab.evolve_programs(cfg, 1)
    assert first[0].within_tolerance
    assert sbstlab.validate(first[0].program) == []
    assert sbstlab.render(first[0].program) == sbstlab.render(second[0].program)


def test_ga_beats_random_on_guided_branch():
    program = sbstlab.parse(
        "program w(x0, x1)\n{\n"
        "  if (x0 > 999000) {\n"
        "    if (x1 < -999000) {\n"
        "      v0 = 1;\n"
        "    }\n"
        "  }\n"
        "}\n"
    )
    ga = sbstlab.GaConfig()
    ga.population_size = 20
    ga.generations = 50
    ga.suite_size = 10
    ga.mutation_rate = 0.25
    ga.criterion = "branch"
    ga.seed = 7001
    ga_out = sbstlab.run_ga(program, ga)

    rc = sbstlab.RandomConfig()
    rc.trials = 1000
    rc.suite_size = 10
    rc.criterion = "branch"
    rc.seed = 7002
    rnd_out = sbstlab.run_random(program, rc)

    assert ga_out.best_coverage_pct > rnd_out.best_coverage_pct
    history = ga_out.best_fitness_history
    assert all(b >= a for a, b in zip(history, history[1:]))


def test_welch_t_test_reference_values():
    r = sbstlab.welch_t_test([95, 96, 97], [93, 94, 95])
    assert math.isclose(r.t_statistic, 2.449489742783178, abs_tol=1e-6)
    assert math.isclose(r.degrees_of_freedom, 4.0, abs_tol=1e-6)
    assert math.isclose(r.p_two_sided, 0.07048399691021993, abs_tol=1e-6)
    assert math.isclose(r.actual_cl, 100 * (1 - r.p_two_sided), abs_tol=1e-9)

    scipy_stats = pytest.importorskip("scipy.stats")
    t, p = scipy_stats.ttest_ind([87.3, 91.2, 78.5], [82.1, 79.9, 85.4, 90.0],
                                 equal_var=False)
    r2 = sbstlab.welch_t_test([87.3, 91.2, 78.5], [82.1, 79.9, 85.4, 90.0])
    assert math.isclose(r2.t_statistic, t, abs_tol=1e-9)
    assert math.isclose(r2.p_two_sided, p, abs_tol=1e-9)


def test_tiny_experiment(tmp_path):
    plan = sbstlab.ExperimentPlan.desk()
    plan.criteria = ["branch"]
    plan.programs_per_cell = 2
    plan.master_seed = 3
    plan.input_arity = 2
    plan.suite_size = 3
    plan.ge_population = 16
    plan.ge_generations = 50
    plan.ga_population = 6
    plan.ga_generations = 5
    plan.random_trials = 20
    plan.jobs = 2
    text = plan.to_text()
    assert "seed = 3" in text

    # shrink the targets so generation is instant
    plan2 = sbstlab.plan_from_text(
        text.replace("branch_targets = 25,50,100", "branch_targets = 2,3,4")
    )
    result = sbstlab.run_experiment(plan2)
    assert len(result.cells) == 3
    for cell in result.cells:
        assert len(cell.per_program) == 2
        assert 0.0 <= cell.actual_cl <= 100.0

    out = tmp_path / "run"
    sbstlab.write_run_dir(result, out)
    assert (out / "summary.csv").exists()
    reloaded = sbstlab.load_run_dir(out)
    assert len(reloaded.cells) == 3
