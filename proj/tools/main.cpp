#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sbstlab/harness.hpp"
#include "sbstlab/rng.hpp"
#include "sbstlab/text.hpp"

namespace fs = std::filesystem;
using namespace sbstlab;

namespace {

std::string default_out() {
  if (const char* env = std::getenv("SBSTLAB_OUT")) return env;
  return "sbstlab-out";
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("file not found: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Program load_program(const std::string& file) {
  return parse(slurp(file));
}

struct ScaleFlags {
  bool desk = false;
  bool paper = false;
};

void add_scale(CLI::App* cmd, ScaleFlags& flags) {
  auto* desk = cmd->add_flag("--desk-scale", flags.desk,
                             "desk-scale budgets (default; minutes)");
  cmd->add_flag("--paper-scale", flags.paper,
                "full-scale budgets (GE/GA 200x10000, random 100000)")
      ->excludes(desk);
}

ExperimentPlan base_plan(const ScaleFlags& flags) {
  return flags.paper ? ExperimentPlan::paper() : ExperimentPlan::desk();
}

bool parse_target(const std::string& text, TargetSpec& out) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) return false;
  const std::string kind = text.substr(0, eq);
  if (kind == "statements")
    out.kind = TargetSpec::Kind::Statements;
  else if (kind == "branches")
    out.kind = TargetSpec::Kind::Branches;
  else
    return false;
  try {
    out.value = std::stoi(text.substr(eq + 1));
  } catch (const std::exception&) {
    return false;
  }
  return out.value > 0;
}

bool parse_domain(const std::string& text, Domain& out) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return false;
  try {
    out.lo = std::stoll(text.substr(0, colon));
    out.hi = std::stoll(text.substr(colon + 1));
  } catch (const std::exception&) {
    return false;
  }
  return out.lo < out.hi;
}

int cmd_gen(const std::string& target_text, int count, std::uint64_t seed,
            const std::string& out_dir, int input_arity,
            const ScaleFlags& scale) {
  TargetSpec target;
  if (!parse_target(target_text, target)) {
    std::cerr << "bad --target, expected statements=<n> or branches=<n>\n";
    return 1;
  }
  const ExperimentPlan plan = base_plan(scale);
  GeConfig cfg;
  cfg.population_size = plan.ge_population;
  cfg.generations = plan.ge_generations;
  cfg.max_wraps = plan.ge_max_wraps;
  cfg.crossover_rate = plan.ge_crossover;
  cfg.mutation_rate = plan.ge_mutation;
  cfg.target = target;
  cfg.input_arity = input_arity;
  cfg.seed = seed;
  cfg.initial_chromosome_size =
      plan.ge_chromosome > 0
          ? plan.ge_chromosome
          : std::max(200, (target.kind == TargetSpec::Kind::Statements ? 10 : 40) *
                                  target.value +
                              100);
  std::printf("seed = %llu\n", static_cast<unsigned long long>(seed));

  const auto evolved = evolve_programs(cfg, count);
  fs::create_directories(fs::path(out_dir) / "suts");
  std::string manifest =
      "file,targetKind,targetValue,achievedValue,geFitness,seed\n";
  for (std::size_t i = 0; i < evolved.size(); ++i) {
    EvolvedProgram ev = evolved[i];
    const std::string stem = std::string(to_string(target.kind)) + "-" +
                             std::to_string(target.value) + "-" +
                             std::to_string(i);
    ev.program.name = stem;
    const std::string rel = "suts/" + stem + ".sut";
    std::ofstream out(fs::path(out_dir) / rel, std::ios::binary);
    out << render(ev.program);
    char fit[32];
    std::snprintf(fit, sizeof fit, "%g", ev.fitness);
    manifest += rel + "," + to_string(target.kind) + "," +
                std::to_string(target.value) + "," + std::to_string(ev.achieved) +
                "," + fit + "," + std::to_string(ev.seed) + "\n";
    std::printf("%s: %s=%d (target %d)%s\n", rel.c_str(), to_string(target.kind),
                ev.achieved, target.value,
                ev.within_tolerance ? "" : " [outside tolerance]");
  }
  std::ofstream mf(fs::path(out_dir) / "manifest.csv", std::ios::binary);
  mf << manifest;
  std::printf("wrote %zu programs under %s\n", evolved.size(), out_dir.c_str());
  return 0;
}

void append_run_record(const std::string& out_dir, const std::string& file,
                       const char* technique, Criterion criterion,
                       std::uint64_t seed, std::int64_t budget, double pct) {
  if (out_dir.empty()) return;
  fs::create_directories(out_dir);
  const fs::path path = fs::path(out_dir) / "runs.csv";
  const bool fresh = !fs::exists(path);
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (fresh) out << "program,technique,criterion,seed,budget,best_coverage_pct\n";
  char pct_s[64];
  std::snprintf(pct_s, sizeof pct_s, "%.17g", pct);
  out << file << "," << technique << "," << to_string(criterion) << "," << seed
      << "," << budget << "," << pct_s << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"search-based test-data generation laboratory"};
  app.require_subcommand(1);

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "evolve benchmark programs to a size target");
  std::string gen_target;
  int gen_count = 10;
  std::uint64_t gen_seed = 42;
  std::string gen_out = default_out();
  int gen_arity = 5;
  ScaleFlags gen_scale;
  gen->add_option("--target", gen_target, "statements=<n> or branches=<n>")
      ->required();
  gen->add_option("--count", gen_count, "programs to evolve")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "rng seed (run i uses seed+i)");
  gen->add_option("--out", gen_out, "output directory");
  gen->add_option("--input-arity", gen_arity, "program input count")
      ->check(CLI::PositiveNumber);
  add_scale(gen, gen_scale);

  // ---- run-ga / run-random ----
  auto* rga = app.add_subcommand("run-ga", "GA test search on a .sut file");
  auto* rrnd = app.add_subcommand("run-random", "random test search on a .sut file");
  std::string rga_file, rrnd_file;
  std::string rga_crit = "branch", rrnd_crit = "branch";
  std::uint64_t rga_seed = 42, rrnd_seed = 42;
  int rga_suite = 10, rrnd_suite = 10;
  std::string rga_domain, rrnd_domain;
  int rga_loops = 1000, rrnd_loops = 1000;
  std::string rga_out, rrnd_out;
  ScaleFlags rga_scale, rrnd_scale;
  rga->add_option("file", rga_file, "program file (.sut)")->required();
  rga->add_option("--criterion", rga_crit, "statement|branch")
      ->check(CLI::IsMember({"statement", "branch"}));
  rga->add_option("--seed", rga_seed, "rng seed");
  rga->add_option("--suite-size", rga_suite, "test cases per suite")
      ->check(CLI::PositiveNumber);
  rga->add_option("--domain", rga_domain, "input domain lo:hi");
  rga->add_option("--max-loop-iters", rga_loops, "loop iteration cap")
      ->check(CLI::PositiveNumber);
  rga->add_option("--out", rga_out, "append the run record to <out>/runs.csv");
  bool rga_traces = false, rrnd_traces = false;
  rga->add_flag("--dump-traces", rga_traces,
                "write per-branch distance minima to <out>/traces/");
  add_scale(rga, rga_scale);
  rrnd->add_option("file", rrnd_file, "program file (.sut)")->required();
  rrnd->add_option("--criterion", rrnd_crit, "statement|branch")
      ->check(CLI::IsMember({"statement", "branch"}));
  rrnd->add_option("--seed", rrnd_seed, "rng seed");
  rrnd->add_option("--suite-size", rrnd_suite, "test cases per suite")
      ->check(CLI::PositiveNumber);
  rrnd->add_option("--domain", rrnd_domain, "input domain lo:hi");
  rrnd->add_option("--max-loop-iters", rrnd_loops, "loop iteration cap")
      ->check(CLI::PositiveNumber);
  rrnd->add_option("--out", rrnd_out, "append the run record to <out>/runs.csv");
  rrnd->add_flag("--dump-traces", rrnd_traces,
                 "write per-branch distance minima to <out>/traces/");
  add_scale(rrnd, rrnd_scale);

  // ---- experiment ----
  auto* exp = app.add_subcommand("experiment", "run the factorial experiment");
  std::string exp_plan_file;
  std::uint64_t exp_seed = 42;
  std::string exp_out = default_out();
  int exp_jobs = 0;
  std::string exp_crit;
  std::string exp_level;
  int exp_ppc = 0;
  int exp_suite = 0;
  int exp_arity = 0;
  int exp_loops = 0;
  std::string exp_domain;
  ScaleFlags exp_scale;
  exp->add_option("plan", exp_plan_file, "optional plan file (key = value lines)");
  exp->add_option("--seed", exp_seed, "master seed");
  exp->add_option("--out", exp_out, "run directory");
  exp->add_option("--jobs", exp_jobs, "worker threads (default: all cores)");
  exp->add_option("--criterion", exp_crit, "restrict to statement|branch")
      ->check(CLI::IsMember({"statement", "branch"}));
  exp->add_option("--level", exp_level, "restrict to low|medium|high")
      ->check(CLI::IsMember({"low", "medium", "high"}));
  exp->add_option("--programs-per-cell", exp_ppc, "programs per cell")
      ->check(CLI::PositiveNumber);
  exp->add_option("--suite-size", exp_suite, "test cases per suite")
      ->check(CLI::PositiveNumber);
  exp->add_option("--input-arity", exp_arity, "program input count")
      ->check(CLI::PositiveNumber);
  exp->add_option("--max-loop-iters", exp_loops, "loop iteration cap")
      ->check(CLI::PositiveNumber);
  exp->add_option("--domain", exp_domain, "input domain lo:hi");
  add_scale(exp, exp_scale);

  // ---- report ----
  auto* rep = app.add_subcommand("report", "re-render CSV summaries and figures");
  std::string rep_dir;
  rep->add_option("rundir", rep_dir, "existing run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    if (gen->parsed())
      return cmd_gen(gen_target, gen_count, gen_seed, gen_out, gen_arity,
                     gen_scale);

    if (rga->parsed() || rrnd->parsed()) {
      const bool is_ga = rga->parsed();
      const std::string& file = is_ga ? rga_file : rrnd_file;
      const Program program = load_program(file);
      const ExperimentPlan plan = base_plan(is_ga ? rga_scale : rrnd_scale);
      const Criterion crit =
          (is_ga ? rga_crit : rrnd_crit) == "statement" ? Criterion::Statement
                                                        : Criterion::Branch;
      Domain domain = plan.domain;
      const std::string& domain_text = is_ga ? rga_domain : rrnd_domain;
      if (!domain_text.empty() && !parse_domain(domain_text, domain)) {
        std::cerr << "bad --domain, expected lo:hi with lo < hi\n";
        return 1;
      }
      ExecLimits limits = plan.limits;
      limits.max_loop_iterations = is_ga ? rga_loops : rrnd_loops;
      const std::uint64_t seed = is_ga ? rga_seed : rrnd_seed;
      std::printf("seed = %llu\n", static_cast<unsigned long long>(seed));
      SearchOutcome outcome;
      if (is_ga) {
        GaConfig cfg;
        cfg.population_size = plan.ga_population;
        cfg.generations = plan.ga_generations;
        cfg.suite_size = rga_suite;
        cfg.domain = domain;
        cfg.crossover_rate = plan.ga_crossover;
        cfg.mutation_rate = plan.ga_mutation;
        cfg.elitism = plan.ga_elitism;
        cfg.criterion = crit;
        cfg.seed = seed;
        cfg.limits = limits;
        outcome = run_ga(program, cfg);
      } else {
        RandomConfig cfg;
        cfg.trials = plan.random_trials;
        cfg.suite_size = rrnd_suite;
        cfg.domain = domain;
        cfg.criterion = crit;
        cfg.seed = seed;
        cfg.limits = limits;
        outcome = run_random(program, cfg);
      }
      std::printf("%s coverage: %.2f%% (%lld suite evaluations)\n",
                  to_string(crit), outcome.best_coverage_pct,
                  static_cast<long long>(outcome.evaluations_used));
      const std::string& out_dir = is_ga ? rga_out : rrnd_out;
      append_run_record(out_dir, file, is_ga ? "ga" : "random", crit, seed,
                        outcome.evaluations_used, outcome.best_coverage_pct);
      if ((is_ga ? rga_traces : rrnd_traces) && !out_dir.empty()) {
        const CoverageReport report =
            run_suite(program, outcome.best_suite.cases, limits);
        fs::create_directories(fs::path(out_dir) / "traces");
        const std::string stem = fs::path(file).stem().string();
        std::ofstream tf(fs::path(out_dir) / "traces" /
                             (stem + (is_ga ? "-ga.csv" : "-random.csv")),
                         std::ios::binary);
        tf << trace_csv(report);
      }
      return 0;
    }

    if (exp->parsed()) {
      ExperimentPlan plan;
      if (!exp_plan_file.empty()) {
        plan = plan_from_text(slurp(exp_plan_file));
        if (exp_scale.paper)
          throw std::runtime_error("--paper-scale cannot override a plan file");
      } else {
        plan = base_plan(exp_scale);
      }
      if (exp->count("--seed")) plan.master_seed = exp_seed;
      if (exp_jobs > 0) plan.jobs = exp_jobs;
      if (!exp_crit.empty())
        plan.criteria = {exp_crit == "statement" ? Criterion::Statement
                                                 : Criterion::Branch};
      if (exp_ppc > 0) plan.programs_per_cell = exp_ppc;
      if (exp_suite > 0) plan.suite_size = exp_suite;
      if (exp_arity > 0) plan.input_arity = exp_arity;
      if (exp_loops > 0) plan.limits.max_loop_iterations = exp_loops;
      if (!exp_domain.empty() && !parse_domain(exp_domain, plan.domain)) {
        std::cerr << "bad --domain, expected lo:hi with lo < hi\n";
        return 1;
      }
      if (!exp_level.empty()) {
        plan.levels = {exp_level == "low"      ? Level::Low
                       : exp_level == "medium" ? Level::Medium
                                               : Level::High};
      }
      std::printf("seed = %llu\n",
                  static_cast<unsigned long long>(plan.master_seed));
      const ExperimentResult result = run_experiment(plan);
      write_run_dir(result, exp_out);
      std::printf("run directory: %s\n", exp_out.c_str());
      for (const CellSummary& cell : result.cells) {
        std::printf("%-9s %-6s target %3d: GA %6.2f +- %5.2f | random %6.2f +- %5.2f | CL %6.2f\n",
                    to_string(cell.criterion), to_string(cell.level),
                    cell.target, cell.stats.ga_mean, cell.stats.ga_std,
                    cell.stats.rnd_mean, cell.stats.rnd_std,
                    cell.stats.actual_cl);
      }
      return 0;
    }

    if (rep->parsed()) {
      const ExperimentResult result = load_run_dir(rep_dir);
      emit_csv(result, rep_dir);
      emit_figures(result, rep_dir);
      std::printf("re-rendered %zu cells in %s\n", result.cells.size(),
                  rep_dir.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
