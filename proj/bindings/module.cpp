#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sbstlab/ge.hpp"
#include "sbstlab/harness.hpp"
#include "sbstlab/interp.hpp"
#include "sbstlab/search.hpp"
#include "sbstlab/stats.hpp"
#include "sbstlab/text.hpp"

namespace py = pybind11;
using namespace sbstlab;

namespace {

Rel rel_from(const std::string& s) {
  if (s == "<") return Rel::Lt;
  if (s == "<=") return Rel::Le;
  if (s == ">") return Rel::Gt;
  if (s == ">=") return Rel::Ge;
  if (s == "==") return Rel::Eq;
  if (s == "!=") return Rel::Ne;
  throw std::invalid_argument("unknown relation '" + s + "'");
}

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::Normal: return "normal";
    case Termination::OverflowHalt: return "overflow_halt";
    case Termination::StepLimit: return "step_limit";
  }
  return "?";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "search-based test-data generation laboratory";

  py::class_<Metrics>(m, "Metrics")
      .def_readonly("statements", &Metrics::statements)
      .def_readonly("branches", &Metrics::branches)
      .def_readonly("loops", &Metrics::loops)
      .def("__repr__", [](const Metrics& s) {
        return "Metrics(statements=" + std::to_string(s.statements) +
               ", branches=" + std::to_string(s.branches) +
               ", loops=" + std::to_string(s.loops) + ")";
      });

  py::class_<Program>(m, "Program")
      .def_property_readonly("name", [](const Program& p) { return p.name; })
      .def_property_readonly("input_arity",
                             [](const Program& p) { return p.input_arity; })
      .def("metrics", &compute_metrics)
      .def("render", &render)
      .def("__repr__", [](const Program& p) {
        const Metrics s = compute_metrics(p);
        return "<Program " + p.name + ": " + std::to_string(s.statements) +
               " statements, " + std::to_string(s.branches) + " branches>";
      });

  m.def("parse", &parse, py::arg("text"),
        "Parse program text into a validated Program.");
  m.def("render", &render, py::arg("program"));
  m.def(
      "validate",
      [](const Program& p) {
        std::vector<std::string> out;
        for (const Violation& v : validate(p)) out.push_back(v.detail);
        return out;
      },
      py::arg("program"), "Violation descriptions; empty means valid.");
  m.def("compute_metrics", &compute_metrics, py::arg("program"));

  // ---- execution ----
  py::class_<ExecLimits>(m, "ExecLimits")
      .def(py::init([](int max_loop_iterations, std::int64_t max_total_steps) {
             ExecLimits l;
             l.max_loop_iterations = max_loop_iterations;
             l.max_total_steps = max_total_steps;
             return l;
           }),
           py::arg("max_loop_iterations") = 1000,
           py::arg("max_total_steps") = 1'000'000)
      .def_readwrite("max_loop_iterations", &ExecLimits::max_loop_iterations)
      .def_readwrite("max_total_steps", &ExecLimits::max_total_steps);

  py::class_<TraceResult>(m, "TraceResult")
      .def_property_readonly("executed_stmt_ids", &TraceResult::executed_stmt_ids)
      .def_property_readonly("covered_outcomes", &TraceResult::covered_outcomes)
      .def_property_readonly("termination",
                             [](const TraceResult& t) {
                               return termination_name(t.termination);
                             })
      .def("min_distance", [](const TraceResult& t, int branch, bool outcome) {
        const std::size_t idx =
            static_cast<std::size_t>(branch) * 2 + (outcome ? 1 : 0);
        if (idx >= t.min_distance.size())
          throw py::index_error("branch id out of range");
        const Value d = t.min_distance[idx];
        return d == kDistanceUnreached ? py::object(py::none())
                                       : py::object(py::int_(d));
      });

  py::class_<CoverageReport>(m, "CoverageReport")
      .def_readonly("statement_pct", &CoverageReport::statement_pct)
      .def_readonly("branch_pct", &CoverageReport::branch_pct)
      .def_readonly("statement_count", &CoverageReport::statement_count)
      .def_readonly("branch_count", &CoverageReport::branch_count)
      .def_property_readonly("covered_statements",
                             &CoverageReport::covered_statements)
      .def_property_readonly("covered_outcomes",
                             &CoverageReport::covered_outcome_count);

  m.def(
      "branch_distance",
      [](const std::string& rel, Value left, Value right, bool desired) {
        return branch_distance(rel_from(rel), left, right, desired);
      },
      py::arg("rel"), py::arg("left"), py::arg("right"),
      py::arg("desired") = true,
      "Korel-style distance; zero exactly when the desired outcome holds.");
  m.def("execute", &execute, py::arg("program"), py::arg("test_case"),
        py::arg("limits") = ExecLimits{});
  m.def(
      "run_suite",
      [](const Program& p, const std::vector<TestCase>& suite,
         const ExecLimits& limits) { return run_suite(p, suite, limits); },
      py::arg("program"), py::arg("suite"), py::arg("limits") = ExecLimits{});

  // ---- generation ----
  py::class_<TargetSpec>(m, "TargetSpec")
      .def(py::init([](const std::string& kind, int value) {
             TargetSpec t;
             if (kind == "statements")
               t.kind = TargetSpec::Kind::Statements;
             else if (kind == "branches")
               t.kind = TargetSpec::Kind::Branches;
             else
               throw std::invalid_argument("kind must be statements|branches");
             t.value = value;
             return t;
           }),
           py::arg("kind"), py::arg("value"))
      .def_property_readonly(
          "kind", [](const TargetSpec& t) { return std::string(to_string(t.kind)); })
      .def_readonly("value", &TargetSpec::value);

  py::class_<GeConfig>(m, "GeConfig")
      .def(py::init<>())
      .def_readwrite("population_size", &GeConfig::population_size)
      .def_readwrite("generations", &GeConfig::generations)
      .def_readwrite("initial_chromosome_size", &GeConfig::initial_chromosome_size)
      .def_readwrite("max_wraps", &GeConfig::max_wraps)
      .def_readwrite("crossover_rate", &GeConfig::crossover_rate)
      .def_readwrite("mutation_rate", &GeConfig::mutation_rate)
      .def_readwrite("elitism", &GeConfig::elitism)
      .def_readwrite("target", &GeConfig::target)
      .def_readwrite("input_arity", &GeConfig::input_arity)
      .def_readwrite("seed", &GeConfig::seed);

  py::class_<EvolvedProgram>(m, "EvolvedProgram")
      .def_readonly("program", &EvolvedProgram::program)
      .def_readonly("achieved", &EvolvedProgram::achieved)
      .def_readonly("fitness", &EvolvedProgram::fitness)
      .def_readonly("seed", &EvolvedProgram::seed)
      .def_readonly("within_tolerance", &EvolvedProgram::within_tolerance);

  m.def("evolve_programs", &evolve_programs, py::arg("config"),
        py::arg("count") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "map_genotype",
      [](const std::vector<int>& codons, int input_arity, int max_wraps) {
        Genotype g;
        g.reserve(codons.size());
        for (int c : codons) {
          if (c < 0 || c > 255)
            throw std::invalid_argument("codons must be in [0, 255]");
          g.push_back(static_cast<Codon>(c));
        }
        const MapResult r = map_genotype(g, builtin_grammar(input_arity), max_wraps);
        return r.program ? py::object(py::cast(*r.program))
                         : py::object(py::none());
      },
      py::arg("codons"), py::arg("input_arity") = 5, py::arg("max_wraps") = 3,
      "Map codons through the built-in grammar; None when wraps are exhausted.");

  // ---- search ----
  py::class_<Domain>(m, "Domain")
      .def(py::init([](Value lo, Value hi) {
             Domain d;
             d.lo = lo;
             d.hi = hi;
             return d;
           }),
           py::arg("lo") = -1'000'000, py::arg("hi") = 1'000'000)
      .def_readwrite("lo", &Domain::lo)
      .def_readwrite("hi", &Domain::hi);

  py::class_<GaConfig>(m, "GaConfig")
      .def(py::init<>())
      .def_readwrite("population_size", &GaConfig::population_size)
      .def_readwrite("generations", &GaConfig::generations)
      .def_readwrite("suite_size", &GaConfig::suite_size)
      .def_readwrite("domain", &GaConfig::domain)
      .def_readwrite("crossover_rate", &GaConfig::crossover_rate)
      .def_readwrite("mutation_rate", &GaConfig::mutation_rate)
      .def_readwrite("elitism", &GaConfig::elitism)
      .def_readwrite("seed", &GaConfig::seed)
      .def_readwrite("limits", &GaConfig::limits)
      .def_property(
          "criterion",
          [](const GaConfig& c) { return std::string(to_string(c.criterion)); },
          [](GaConfig& c, const std::string& s) {
            c.criterion = s == "statement" ? Criterion::Statement : Criterion::Branch;
          });

  py::class_<RandomConfig>(m, "RandomConfig")
      .def(py::init<>())
      .def_readwrite("trials", &RandomConfig::trials)
      .def_readwrite("suite_size", &RandomConfig::suite_size)
      .def_readwrite("domain", &RandomConfig::domain)
      .def_readwrite("seed", &RandomConfig::seed)
      .def_readwrite("limits", &RandomConfig::limits)
      .def_property(
          "criterion",
          [](const RandomConfig& c) { return std::string(to_string(c.criterion)); },
          [](RandomConfig& c, const std::string& s) {
            c.criterion = s == "statement" ? Criterion::Statement : Criterion::Branch;
          });

  py::class_<SuiteChromosome>(m, "SuiteChromosome")
      .def(py::init([](std::vector<TestCase> cases) {
             SuiteChromosome s;
             s.cases = std::move(cases);
             return s;
           }),
           py::arg("cases"))
      .def_readonly("cases", &SuiteChromosome::cases);

  py::class_<SearchOutcome>(m, "SearchOutcome")
      .def_readonly("best_suite", &SearchOutcome::best_suite)
      .def_readonly("best_coverage_pct", &SearchOutcome::best_coverage_pct)
      .def_readonly("evaluations_used", &SearchOutcome::evaluations_used)
      .def_readonly("best_fitness_history", &SearchOutcome::best_fitness_history);

  m.def(
      "suite_fitness",
      [](const Program& p, const SuiteChromosome& s, const std::string& criterion,
         const ExecLimits& limits) {
        return suite_fitness(
            p, s, criterion == "statement" ? Criterion::Statement : Criterion::Branch,
            limits);
      },
      py::arg("program"), py::arg("suite"), py::arg("criterion") = "branch",
      py::arg("limits") = ExecLimits{});
  m.def("run_ga", &run_ga, py::arg("program"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("run_random", &run_random, py::arg("program"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  // ---- statistics ----
  m.def(
      "mean_stdev",
      [](const std::vector<double>& v) {
        const auto r = stats::mean_stdev(v);
        return py::make_tuple(r.mean, r.stdev);
      },
      py::arg("sample"), "Mean and sample standard deviation (n-1).");
  py::class_<stats::TTestResult>(m, "TTestResult")
      .def_readonly("t_statistic", &stats::TTestResult::t_statistic)
      .def_readonly("degrees_of_freedom", &stats::TTestResult::degrees_of_freedom)
      .def_readonly("p_two_sided", &stats::TTestResult::p_two_sided)
      .def_readonly("actual_cl", &stats::TTestResult::actual_cl)
      .def_readonly("exact_equal", &stats::TTestResult::exact_equal);
  m.def(
      "welch_t_test",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        return stats::welch_t_test(a, b);
      },
      py::arg("a"), py::arg("b"));
  m.def("incomplete_beta", &stats::incomplete_beta, py::arg("a"), py::arg("b"),
        py::arg("x"));
  m.def("student_t_p_two_sided", &stats::student_t_p_two_sided, py::arg("t"),
        py::arg("df"));

  // ---- experiment harness ----
  py::class_<ExperimentPlan>(m, "ExperimentPlan")
      .def_static("desk", &ExperimentPlan::desk)
      .def_static("paper", &ExperimentPlan::paper)
      .def_readwrite("programs_per_cell", &ExperimentPlan::programs_per_cell)
      .def_readwrite("master_seed", &ExperimentPlan::master_seed)
      .def_readwrite("input_arity", &ExperimentPlan::input_arity)
      .def_readwrite("suite_size", &ExperimentPlan::suite_size)
      .def_readwrite("jobs", &ExperimentPlan::jobs)
      .def_readwrite("ge_population", &ExperimentPlan::ge_population)
      .def_readwrite("ge_generations", &ExperimentPlan::ge_generations)
      .def_readwrite("ga_population", &ExperimentPlan::ga_population)
      .def_readwrite("ga_generations", &ExperimentPlan::ga_generations)
      .def_readwrite("random_trials", &ExperimentPlan::random_trials)
      .def_property(
          "criteria",
          [](const ExperimentPlan& p) {
            std::vector<std::string> out;
            for (Criterion c : p.criteria) out.emplace_back(to_string(c));
            return out;
          },
          [](ExperimentPlan& p, const std::vector<std::string>& names) {
            p.criteria.clear();
            for (const std::string& s : names)
              p.criteria.push_back(s == "statement" ? Criterion::Statement
                                                    : Criterion::Branch);
          })
      .def("to_text", &plan_to_text);
  m.def("plan_from_text", &plan_from_text, py::arg("text"));

  py::class_<ProgramResult>(m, "ProgramResult")
      .def_readonly("file", &ProgramResult::file)
      .def_readonly("target", &ProgramResult::target)
      .def_readonly("achieved", &ProgramResult::achieved)
      .def_readonly("ga_coverage", &ProgramResult::ga_coverage)
      .def_readonly("rnd_coverage", &ProgramResult::rnd_coverage);

  py::class_<CellSummary>(m, "CellSummary")
      .def_property_readonly(
          "criterion",
          [](const CellSummary& c) { return std::string(to_string(c.criterion)); })
      .def_property_readonly(
          "level",
          [](const CellSummary& c) { return std::string(to_string(c.level)); })
      .def_readonly("target", &CellSummary::target)
      .def_property_readonly("ga_mean",
                             [](const CellSummary& c) { return c.stats.ga_mean; })
      .def_property_readonly("ga_std",
                             [](const CellSummary& c) { return c.stats.ga_std; })
      .def_property_readonly("rnd_mean",
                             [](const CellSummary& c) { return c.stats.rnd_mean; })
      .def_property_readonly("rnd_std",
                             [](const CellSummary& c) { return c.stats.rnd_std; })
      .def_property_readonly("actual_cl",
                             [](const CellSummary& c) { return c.stats.actual_cl; })
      .def_readonly("per_program", &CellSummary::per_program);

  py::class_<ExperimentResult>(m, "ExperimentResult")
      .def_readonly("cells", &ExperimentResult::cells);

  m.def("run_experiment", &run_experiment, py::arg("plan"),
        py::call_guard<py::gil_scoped_release>());
  m.def("write_run_dir", &write_run_dir, py::arg("result"), py::arg("run_dir"));
  m.def("load_run_dir", &load_run_dir, py::arg("run_dir"));
}
