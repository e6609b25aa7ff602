#include "sbstlab/harness.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sbstlab/rng.hpp"
#include "sbstlab/text.hpp"

namespace sbstlab {

namespace fs = std::filesystem;

const char* to_string(Level level) {
  switch (level) {
    case Level::Low: return "low";
    case Level::Medium: return "medium";
    case Level::High: return "high";
  }
  return "?";
}

std::uint64_t fnv1a_hash(std::string_view data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

ExperimentPlan ExperimentPlan::desk() { return ExperimentPlan{}; }

ExperimentPlan ExperimentPlan::paper() {
  ExperimentPlan p;
  p.ge_population = 200;
  p.ge_generations = 10000;
  p.ge_chromosome = 200;
  p.ga_population = 200;
  p.ga_generations = 10000;
  p.ga_mutation = 0.02;
  p.random_trials = 100'000;
  return p;
}

int ExperimentPlan::target_for(Criterion criterion, Level level) const {
  const auto& t = criterion == Criterion::Statement ? statement_targets
                                                    : branch_targets;
  return t[static_cast<std::size_t>(level)];
}

void validate_plan(const ExperimentPlan& plan) {
  if (plan.criteria.empty())
    throw std::invalid_argument("plan needs at least one criterion");
  if (plan.levels.empty())
    throw std::invalid_argument("plan needs at least one level");
  if (plan.programs_per_cell < 2)
    throw std::invalid_argument("programs_per_cell must be >= 2");
  for (const auto& t : {plan.statement_targets, plan.branch_targets})
    if (!(t[0] < t[1] && t[1] < t[2]))
      throw std::invalid_argument("targets must increase from low to high");
  if (plan.input_arity < 1)
    throw std::invalid_argument("input_arity must be >= 1");
  if (plan.suite_size < 1)
    throw std::invalid_argument("suite_size must be >= 1");
  if (plan.domain.lo >= plan.domain.hi)
    throw std::invalid_argument("domain must satisfy lo < hi");
  if (plan.ge_population < 2 || plan.ga_population < 2)
    throw std::invalid_argument("population sizes must be >= 2");
  if (plan.random_trials < 1)
    throw std::invalid_argument("random_trials must be >= 1");
}

namespace {

std::string fmt_fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fmt_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_rate(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string cell_stem(Criterion c, Level l, int index) {
  return std::string(to_string(c)) + "-" + to_string(l) + "-" +
         std::to_string(index);
}

int auto_chromosome(const TargetSpec& target) {
  const int per_unit =
      target.kind == TargetSpec::Kind::Statements ? 10 : 40;
  return std::max(200, per_unit * target.value + 100);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Criterion criterion_from(const std::string& s) {
  if (s == "statement") return Criterion::Statement;
  if (s == "branch") return Criterion::Branch;
  throw std::invalid_argument("unknown criterion '" + s + "'");
}

Level level_from(const std::string& s) {
  if (s == "low") return Level::Low;
  if (s == "medium") return Level::Medium;
  if (s == "high") return Level::High;
  throw std::invalid_argument("unknown level '" + s + "'");
}

}  // namespace

std::string plan_to_text(const ExperimentPlan& plan) {
  std::ostringstream os;
  os << "seed = " << plan.master_seed << "\n";
  os << "criteria = ";
  for (std::size_t i = 0; i < plan.criteria.size(); ++i)
    os << (i ? "," : "") << to_string(plan.criteria[i]);
  os << "\n";
  os << "levels = ";
  for (std::size_t i = 0; i < plan.levels.size(); ++i)
    os << (i ? "," : "") << to_string(plan.levels[i]);
  os << "\n";
  os << "statement_targets = " << plan.statement_targets[0] << ","
     << plan.statement_targets[1] << "," << plan.statement_targets[2] << "\n";
  os << "branch_targets = " << plan.branch_targets[0] << ","
     << plan.branch_targets[1] << "," << plan.branch_targets[2] << "\n";
  os << "programs_per_cell = " << plan.programs_per_cell << "\n";
  os << "input_arity = " << plan.input_arity << "\n";
  os << "suite_size = " << plan.suite_size << "\n";
  os << "domain = " << plan.domain.lo << ":" << plan.domain.hi << "\n";
  os << "max_loop_iterations = " << plan.limits.max_loop_iterations << "\n";
  os << "max_total_steps = " << plan.limits.max_total_steps << "\n";
  os << "ge_population = " << plan.ge_population << "\n";
  os << "ge_generations = " << plan.ge_generations << "\n";
  os << "ge_chromosome = ";
  if (plan.ge_chromosome > 0)
    os << plan.ge_chromosome << "\n";
  else
    os << "auto\n";
  os << "ge_max_wraps = " << plan.ge_max_wraps << "\n";
  os << "ge_crossover = " << fmt_rate(plan.ge_crossover) << "\n";
  os << "ge_mutation = " << fmt_rate(plan.ge_mutation) << "\n";
  os << "ga_population = " << plan.ga_population << "\n";
  os << "ga_generations = " << plan.ga_generations << "\n";
  os << "ga_crossover = " << fmt_rate(plan.ga_crossover) << "\n";
  os << "ga_mutation = " << fmt_rate(plan.ga_mutation) << "\n";
  os << "ga_elitism = " << plan.ga_elitism << "\n";
  os << "random_trials = " << plan.random_trials << "\n";
  return os.str();
}

ExperimentPlan plan_from_text(const std::string& text) {
  ExperimentPlan plan = ExperimentPlan::desk();
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos)
      throw std::invalid_argument("plan line " + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto as_int = [&](const std::string& v) { return std::stoi(v); };
    auto as_double = [&](const std::string& v) { return std::stod(v); };
    auto as_triple = [&](const std::string& v) {
      std::array<int, 3> t{};
      std::istringstream ss(v);
      std::string part;
      for (int i = 0; i < 3; ++i) {
        if (!std::getline(ss, part, ','))
          throw std::invalid_argument("expected three targets in '" + v + "'");
        t[static_cast<std::size_t>(i)] = as_int(part);
      }
      return t;
    };
    try {
      if (key == "seed")
        plan.master_seed = std::stoull(value);
      else if (key == "criteria") {
        plan.criteria.clear();
        std::istringstream ss(value);
        std::string part;
        while (std::getline(ss, part, ','))
          plan.criteria.push_back(criterion_from(trim(part)));
      } else if (key == "levels") {
        plan.levels.clear();
        std::istringstream ss(value);
        std::string part;
        while (std::getline(ss, part, ','))
          plan.levels.push_back(level_from(trim(part)));
      } else if (key == "statement_targets")
        plan.statement_targets = as_triple(value);
      else if (key == "branch_targets")
        plan.branch_targets = as_triple(value);
      else if (key == "programs_per_cell")
        plan.programs_per_cell = as_int(value);
      else if (key == "input_arity")
        plan.input_arity = as_int(value);
      else if (key == "suite_size")
        plan.suite_size = as_int(value);
      else if (key == "domain") {
        const auto colon = value.find(':');
        if (colon == std::string::npos)
          throw std::invalid_argument("domain must be lo:hi");
        plan.domain.lo = std::stoll(value.substr(0, colon));
        plan.domain.hi = std::stoll(value.substr(colon + 1));
      } else if (key == "max_loop_iterations")
        plan.limits.max_loop_iterations = as_int(value);
      else if (key == "max_total_steps")
        plan.limits.max_total_steps = std::stoll(value);
      else if (key == "ge_population")
        plan.ge_population = as_int(value);
      else if (key == "ge_generations")
        plan.ge_generations = as_int(value);
      else if (key == "ge_chromosome")
        plan.ge_chromosome = value == "auto" ? 0 : as_int(value);
      else if (key == "ge_max_wraps")
        plan.ge_max_wraps = as_int(value);
      else if (key == "ge_crossover")
        plan.ge_crossover = as_double(value);
      else if (key == "ge_mutation")
        plan.ge_mutation = as_double(value);
      else if (key == "ga_population")
        plan.ga_population = as_int(value);
      else if (key == "ga_generations")
        plan.ga_generations = as_int(value);
      else if (key == "ga_crossover")
        plan.ga_crossover = as_double(value);
      else if (key == "ga_mutation")
        plan.ga_mutation = as_double(value);
      else if (key == "ga_elitism")
        plan.ga_elitism = as_int(value);
      else if (key == "random_trials")
        plan.random_trials = as_int(value);
      else
        throw std::invalid_argument("unknown plan key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception& e) {
      throw std::invalid_argument("plan line " + std::to_string(lineno) +
                                  ": bad value for " + key + ": " + e.what());
    }
  }
  return plan;
}

namespace {

struct CellKey {
  Criterion criterion;
  Level level;
  int target;
};

std::vector<CellKey> plan_cells(const ExperimentPlan& plan) {
  std::vector<CellKey> cells;
  for (Criterion c : plan.criteria)
    for (Level l : plan.levels)
      cells.push_back({c, l, plan.target_for(c, l)});
  return cells;
}

ProgramResult run_one_program(const ExperimentPlan& plan, const CellKey& cell,
                              int index) {
  const std::string stem = cell_stem(cell.criterion, cell.level, index);
  const std::string tag_base = std::string(to_string(cell.criterion)) + "/" +
                               to_string(cell.level) + "/" +
                               std::to_string(index);

  GeConfig ge;
  ge.population_size = plan.ge_population;
  ge.generations = plan.ge_generations;
  ge.max_wraps = plan.ge_max_wraps;
  ge.crossover_rate = plan.ge_crossover;
  ge.mutation_rate = plan.ge_mutation;
  ge.input_arity = plan.input_arity;
  ge.target.kind = cell.criterion == Criterion::Statement
                       ? TargetSpec::Kind::Statements
                       : TargetSpec::Kind::Branches;
  ge.target.value = cell.target;
  ge.initial_chromosome_size =
      plan.ge_chromosome > 0 ? plan.ge_chromosome : auto_chromosome(ge.target);
  ge.seed = derive_seed(plan.master_seed, tag_base + "/ge");

  EvolvedProgram evolved = std::move(evolve_programs(ge, 1).front());
  evolved.program.name = stem;

  ProgramResult r;
  r.file = "suts/" + stem + ".sut";
  r.text = render(evolved.program);
  r.text_hash = fnv1a_hash(r.text);
  r.target = cell.target;
  r.achieved = evolved.achieved;
  r.ge_fitness = evolved.fitness;
  r.within_tolerance = evolved.within_tolerance;
  r.ge_seed = evolved.seed;

  GaConfig ga;
  ga.population_size = plan.ga_population;
  ga.generations = plan.ga_generations;
  ga.suite_size = plan.suite_size;
  ga.domain = plan.domain;
  ga.crossover_rate = plan.ga_crossover;
  ga.mutation_rate = plan.ga_mutation;
  ga.elitism = plan.ga_elitism;
  ga.criterion = cell.criterion;
  ga.limits = plan.limits;
  ga.seed = derive_seed(plan.master_seed, tag_base + "/ga");
  r.ga_seed = ga.seed;
  const SearchOutcome ga_out = run_ga(evolved.program, ga);
  r.ga_coverage = ga_out.best_coverage_pct;
  r.ga_evaluations = ga_out.evaluations_used;

  RandomConfig rnd;
  rnd.trials = plan.random_trials;
  rnd.suite_size = plan.suite_size;
  rnd.domain = plan.domain;
  rnd.criterion = cell.criterion;
  rnd.limits = plan.limits;
  rnd.seed = derive_seed(plan.master_seed, tag_base + "/random");
  r.rnd_seed = rnd.seed;
  const SearchOutcome rnd_out = run_random(evolved.program, rnd);
  r.rnd_coverage = rnd_out.best_coverage_pct;
  r.rnd_evaluations = rnd_out.evaluations_used;

  return r;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentPlan& plan) {
  validate_plan(plan);
  const std::vector<CellKey> cells = plan_cells(plan);
  const int per_cell = plan.programs_per_cell;

  struct Task {
    std::size_t cell;
    int index;
  };
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (int i = 0; i < per_cell; ++i) tasks.push_back({c, i});

  std::vector<ProgramResult> results(tasks.size());
  std::vector<std::string> errors(tasks.size());
  std::atomic<std::size_t> cursor{0};

  unsigned workers = plan.jobs > 0
                         ? static_cast<unsigned>(plan.jobs)
                         : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(tasks.size()));

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& t = tasks[i];
      try {
        results[i] = run_one_program(plan, cells[t.cell], t.index);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (!errors[i].empty()) {
      const Task& t = tasks[i];
      throw std::runtime_error(
          "cell " + cell_stem(cells[t.cell].criterion, cells[t.cell].level,

                              t.index) +
          " failed: " + errors[i]);
    }
  }

  ExperimentResult out;
  out.plan = plan;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    CellSummary cell;
    cell.criterion = cells[c].criterion;
    cell.level = cells[c].level;
    cell.target = cells[c].target;
    std::vector<double> ga, rnd;
    for (int i = 0; i < per_cell; ++i) {
      const ProgramResult& r = results[c * static_cast<std::size_t>(per_cell) +
                                       static_cast<std::size_t>(i)];
      cell.per_program.push_back(r);
      ga.push_back(r.ga_coverage);
      rnd.push_back(r.rnd_coverage);
    }
    cell.stats = stats::summarize_cell(ga, rnd);
    out.cells.push_back(std::move(cell));
  }
  return out;
}

void emit_csv(const ExperimentResult& result, const fs::path& run_dir) {
  if (result.cells.empty()) throw std::invalid_argument("no results to emit");
  fs::create_directories(run_dir);

  const std::string header =
      "criterion,level,target,ga_mean,ga_std,rnd_mean,rnd_std,actual_cl\n";
  std::string summary = header;
  std::string summary_raw = header;
  for (const CellSummary& c : result.cells) {
    std::string prefix = std::string(to_string(c.criterion)) + "," +
                         to_string(c.level) + "," + std::to_string(c.target) +
                         ",";
    summary += prefix + fmt_fixed(c.stats.ga_mean) + "," +
               fmt_fixed(c.stats.ga_std) + "," + fmt_fixed(c.stats.rnd_mean) +
               "," + fmt_fixed(c.stats.rnd_std) + "," +
               fmt_fixed(c.stats.actual_cl) + "\n";
    summary_raw += prefix + fmt_full(c.stats.ga_mean) + "," +
                   fmt_full(c.stats.ga_std) + "," + fmt_full(c.stats.rnd_mean) +
                   "," + fmt_full(c.stats.rnd_std) + "," +
                   fmt_full(c.stats.actual_cl) + "\n";
  }
  write_file(run_dir / "summary.csv", summary);
  write_file(run_dir / "summary_raw.csv", summary_raw);

  std::string pp = "criterion,level,program,ga_coverage,rnd_coverage\n";
  std::string pp_raw =
      "criterion,level,target,program,program_hash,ga_coverage,rnd_coverage\n";
  for (const CellSummary& c : result.cells) {
    for (const ProgramResult& r : c.per_program) {
      const std::string prefix = std::string(to_string(c.criterion)) + "," +
                                 to_string(c.level) + ",";
      pp += prefix + r.file + "," + fmt_fixed(r.ga_coverage) + "," +
            fmt_fixed(r.rnd_coverage) + "\n";
      pp_raw += prefix + std::to_string(c.target) + "," + r.file + "," +
                std::to_string(r.text_hash) + "," + fmt_full(r.ga_coverage) +
                "," + fmt_full(r.rnd_coverage) + "\n";
    }
  }
  write_file(run_dir / "per_program.csv", pp);
  write_file(run_dir / "per_program_raw.csv", pp_raw);
}

void write_run_dir(const ExperimentResult& result, const fs::path& run_dir) {
  fs::create_directories(run_dir / "suts");

  std::string manifest = "file,targetKind,targetValue,achievedValue,geFitness,seed\n";
  std::string runs = "program,technique,criterion,seed,budget,best_coverage_pct\n";
  for (const CellSummary& c : result.cells) {
    const char* kind =
        c.criterion == Criterion::Statement ? "statements" : "branches";
    for (const ProgramResult& r : c.per_program) {
      if (!r.text.empty()) write_file(run_dir / r.file, r.text);
      manifest += r.file + "," + kind + "," + std::to_string(r.target) + "," +
                  std::to_string(r.achieved) + "," + fmt_rate(r.ge_fitness) +
                  "," + std::to_string(r.ge_seed) + "\n";
      runs += r.file + ",ga," + to_string(c.criterion) + "," +
              std::to_string(r.ga_seed) + "," + std::to_string(r.ga_evaluations) +
              "," + fmt_full(r.ga_coverage) + "\n";
      runs += r.file + ",random," + std::string(to_string(c.criterion)) + "," +
              std::to_string(r.rnd_seed) + "," +
              std::to_string(r.rnd_evaluations) + "," +
              fmt_full(r.rnd_coverage) + "\n";
    }
  }
  write_file(run_dir / "manifest.csv", manifest);
  write_file(run_dir / "runs.csv", runs);
  write_file(run_dir / "plan.txt", plan_to_text(result.plan));
  emit_csv(result, run_dir);
  emit_figures(result, run_dir);
}

ExperimentResult load_run_dir(const fs::path& run_dir) {
  ExperimentResult out;
  out.plan = plan_from_text(read_file(run_dir / "plan.txt"));

  std::istringstream in(read_file(run_dir / "per_program_raw.csv"));
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty per_program_raw.csv");
  auto cell_of = [&out](Criterion c, Level l, int target) -> CellSummary& {
    for (CellSummary& cell : out.cells)
      if (cell.criterion == c && cell.level == l) return cell;
    CellSummary cell;
    cell.criterion = c;
    cell.level = l;
    cell.target = target;
    out.cells.push_back(std::move(cell));
    return out.cells.back();
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string criterion, level, target, file, hash, ga, rnd;
    if (!std::getline(ss, criterion, ',') || !std::getline(ss, level, ',') ||
        !std::getline(ss, target, ',') || !std::getline(ss, file, ',') ||
        !std::getline(ss, hash, ',') || !std::getline(ss, ga, ',') ||
        !std::getline(ss, rnd))
      throw std::runtime_error("malformed per_program_raw.csv row: " + line);
    CellSummary& cell =
        cell_of(criterion_from(criterion), level_from(level), std::stoi(target));
    ProgramResult r;
    r.file = file;
    r.text_hash = std::stoull(hash);
    r.target = std::stoi(target);
    r.ga_coverage = std::stod(ga);
    r.rnd_coverage = std::stod(rnd);
    cell.per_program.push_back(std::move(r));
  }
  for (CellSummary& cell : out.cells) {
    std::vector<double> ga, rnd;
    for (const ProgramResult& r : cell.per_program) {
      ga.push_back(r.ga_coverage);
      rnd.push_back(r.rnd_coverage);
    }
    cell.stats = stats::summarize_cell(ga, rnd);
  }
  return out;
}

}  // namespace sbstlab
