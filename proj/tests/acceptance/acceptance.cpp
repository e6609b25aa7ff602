// Acceptance suite: runs every acceptance criterion at its stated budget and
// tolerance and prints one PASS/FAIL line per criterion. Exit code is the
// number of failed criteria. argv[1] must be the path to the sbstlab CLI
// binary (used for the experiment determinism checks).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../common/reference_interp.hpp"
#include "sbstlab/ge.hpp"
#include "sbstlab/harness.hpp"
#include "sbstlab/interp.hpp"
#include "sbstlab/rng.hpp"
#include "sbstlab/search.hpp"
#include "sbstlab/stats.hpp"
#include "sbstlab/text.hpp"

using namespace sbstlab;
namespace fs = std::filesystem;

namespace {

struct Line {
  int index;
  bool ok;
  std::string text;
};
std::vector<Line> g_lines;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

void report(int index, bool pass, const std::string& detail, double elapsed,
            double budget_s) {
  const bool in_budget = budget_s <= 0.0 || elapsed <= budget_s;
  const bool ok = pass && in_budget;
  char buf[64];
  std::snprintf(buf, sizeof buf, " (%.1fs", elapsed);
  std::string text = detail + buf;
  if (budget_s > 0 && !in_budget) {
    std::snprintf(buf, sizeof buf, ", over the %.0fs budget", budget_s);
    text += buf;
  }
  text += ")";
  g_lines.push_back({index, ok, text});
}

// ---- criterion 1: branch distance exactness ----
void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  auto expect = [&ok](Value got, Value want) { ok = ok && got == want; };

  // satisfied conditions cost zero, one per relation
  expect(branch_distance(Rel::Lt, 1, 2, true), 0);
  expect(branch_distance(Rel::Le, 2, 2, true), 0);
  expect(branch_distance(Rel::Gt, 3, 2, true), 0);
  expect(branch_distance(Rel::Ge, 2, 2, true), 0);
  expect(branch_distance(Rel::Eq, 5, 5, true), 0);
  expect(branch_distance(Rel::Ne, 5, 6, true), 0);
  // x >= z+10 with x=10, z=5: distance (z+10)-x = 5
  expect(branch_distance(Rel::Ge, 10, 15, true), 5);
  // x >= z+10 with x=20, z=5: satisfied
  expect(branch_distance(Rel::Ge, 20, 15, true), 0);
  // unsatisfied forms of all six relations
  expect(branch_distance(Rel::Ge, 10, 15, true), 5);   // b-a
  expect(branch_distance(Rel::Gt, 10, 15, true), 6);   // b-a+1
  expect(branch_distance(Rel::Le, 15, 10, true), 5);   // a-b
  expect(branch_distance(Rel::Lt, 15, 10, true), 6);   // a-b+1
  expect(branch_distance(Rel::Eq, 7, 3, true), 4);     // |a-b|
  expect(branch_distance(Rel::Eq, 7, 3, false), 0);
  expect(branch_distance(Rel::Ne, 3, 3, true), 1);     // K = 1
  report(1, ok, "branch-distance examples, all six relations, exact",
         seconds_since(t0), 1.0);
}

// ---- criterion 2: interpreter vs exhaustive-enumeration oracle ----
void criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  const GrammarSpec grammar = builtin_grammar(2);
  const ExecLimits limits;
  Rng rng(20250810);
  int programs_checked = 0;
  int mismatches = 0;
  while (programs_checked < 100) {
    Genotype g(400);
    for (Codon& c : g) c = static_cast<Codon>(rng.below(256));
    const MapResult mapped = map_genotype(g, grammar, 3);
    if (!mapped.program) continue;
    if (compute_metrics(*mapped.program).branches > 3) continue;
    ++programs_checked;

    const CompiledProgram cp(*mapped.program);
    refinterp::RefInterp ref(*mapped.program, limits);
    std::set<std::pair<int, bool>> prod_outcomes, ref_outcomes;
    for (Value x0 = -10; x0 <= 10; ++x0) {
      for (Value x1 = -10; x1 <= 10; ++x1) {
        const TestCase tc{x0, x1};
        const TraceResult t = cp.run(tc, limits);
        for (const auto& o : t.covered_outcomes()) prod_outcomes.insert(o);
        const refinterp::RefTrace r = ref.run(tc);
        ref_outcomes.insert(r.outcomes.begin(), r.outcomes.end());
      }
    }
    if (prod_outcomes != ref_outcomes) ++mismatches;
  }
  std::ostringstream detail;
  detail << "oracle equivalence on 100 programs x 441 inputs, " << mismatches
         << " mismatches";
  report(2, mismatches == 0, detail.str(), seconds_since(t0), 120.0);
}

// ---- criterion 3: GE targeting at desk budget ----
void criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::ostringstream detail;
  detail << "ge targeting";
  for (const TargetSpec target :
       {TargetSpec{TargetSpec::Kind::Statements, 75},
        TargetSpec{TargetSpec::Kind::Branches, 25}}) {
    const auto tt = std::chrono::steady_clock::now();
    GeConfig cfg;
    cfg.population_size = 50;
    cfg.generations = 200;
    cfg.target = target;
    cfg.input_arity = 5;
    cfg.initial_chromosome_size =
        (target.kind == TargetSpec::Kind::Statements ? 10 : 40) * target.value +
        100;
    cfg.seed = 4242;
    const auto runs = evolve_programs(cfg, 10);
    int within = 0;
    int valid = 0;
    for (const EvolvedProgram& ev : runs) {
      within += ev.within_tolerance;
      valid += validate(ev.program).empty();
    }
    const double elapsed = seconds_since(tt);
    detail << "; " << to_string(target.kind) << "=" << target.value << ": "
           << within << "/10 within 5%, " << valid << "/10 valid";
    ok = ok && within >= 9 && valid == 10 && elapsed < 120.0;
  }
  report(3, ok, detail.str(), seconds_since(t0), 0.0);
}

// ---- criteria 4+6 share two CLI experiment runs ----
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const fs::path& path) {
  CsvTable t;
  std::ifstream in(path);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> row;
    std::istringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) row.push_back(field);
    if (first) {
      t.header = row;
      first = false;
    } else {
      t.rows.push_back(row);
    }
  }
  return t;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criteria4and6(const std::string& cli) {
  const fs::path base = fs::temp_directory_path() / "sbstlab_acceptance";
  fs::remove_all(base);
  fs::create_directories(base);
  const fs::path run1 = base / "run1";
  const fs::path run2 = base / "run2";

  // criterion 6 first: the same seeded desk-scale command twice
  const auto t6 = std::chrono::steady_clock::now();
  bool ran = true;
  for (const fs::path& dir : {run1, run2}) {
    const std::string cmd = "\"" + cli + "\" experiment --seed 42 --desk-scale --out \"" +
                            dir.string() + "\" > \"" + (dir.string() + ".log") +
                            "\" 2>&1";
    if (std::system(cmd.c_str()) != 0) ran = false;
  }
  bool identical = ran;
  if (ran) {
    for (const char* name : {"summary.csv", "per_program.csv", "manifest.csv"})
      identical = identical && slurp(run1 / name) == slurp(run2 / name) &&
                  !slurp(run1 / name).empty();
  }
  const double elapsed6 = seconds_since(t6);

  // criterion 4: directional pattern from the first run's full-precision summary
  const auto t4 = std::chrono::steady_clock::now();
  bool pattern = false;
  std::ostringstream detail4;
  if (ran) {
    const CsvTable raw = read_csv(run1 / "summary_raw.csv");
    int branch_wins = 0, branch_cells = 0, stmt_wins = 0, stmt_cells = 0;
    for (const auto& row : raw.rows) {
      if (row.size() < 8) continue;
      const double ga_mean = std::stod(row[3]);
      const double rnd_mean = std::stod(row[5]);
      if (row[0] == "branch") {
        ++branch_cells;
        branch_wins += ga_mean >= rnd_mean;
      } else {
        ++stmt_cells;
        stmt_wins += ga_mean >= rnd_mean;
      }
    }
    const CsvTable per_program = read_csv(run1 / "per_program_raw.csv");
    pattern = branch_cells == 3 && stmt_cells == 3 && branch_wins == 3 &&
              stmt_wins >= 2 && per_program.rows.size() == 60;
    detail4 << "directional reproduction over "
            << per_program.rows.size()
            << " programs: ga >= random in " << branch_wins
            << "/3 branch cells and " << stmt_wins << "/3 statement cells";
  } else {
    detail4 << "directional reproduction: experiment run failed";
  }
  report(4, pattern, detail4.str(), elapsed6 + seconds_since(t4), 900.0);

  std::ostringstream detail6;
  detail6 << "two `experiment --seed 42 --desk-scale` runs byte-identical "
             "(summary, per_program, manifest)";
  report(6, identical, detail6.str(), elapsed6, 0.0);
  fs::remove_all(base);
}

// ---- criterion 5: statistics oracle ----
void criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  const auto close = [](double a, double b, double tol) {
    return std::fabs(a - b) <= tol;
  };
  // reference values computed with scipy.stats.ttest_ind(equal_var=False)
  {
    const std::vector<double> a{95, 96, 97}, b{93, 94, 95};
    const auto r = stats::welch_t_test(a, b);
    ok = ok && close(r.t_statistic, 2.449489742783178, 1e-6);
    ok = ok && close(r.degrees_of_freedom, 4.0, 1e-6);
    ok = ok && close(r.p_two_sided, 0.07048399691021993, 1e-6);
  }
  {
    const std::vector<double> a{87.3, 91.2, 78.5, 95.0, 88.8}, b{82.1, 79.9, 85.4};
    const auto r = stats::welch_t_test(a, b);
    ok = ok && close(r.t_statistic, 1.7933164468498781, 1e-6);
    ok = ok && close(r.degrees_of_freedom, 5.8324770485104205, 1e-6);
    ok = ok && close(r.p_two_sided, 0.12450208311345086, 1e-6);
  }
  {
    const std::vector<double> a{10, 12, 9, 11}, b{8, 7, 9, 6, 8, 7};
    const auto r = stats::welch_t_test(a, b);
    ok = ok && close(r.t_statistic, 3.8729833462074166, 1e-6);
    ok = ok && close(r.degrees_of_freedom, 5.5733944954128445, 1e-6);
    ok = ok && close(r.p_two_sided, 0.009504615864902597, 1e-6);
  }
  for (double t = 0.0; t <= 10.0; t += 0.0625) {
    ok = ok && close(stats::student_t_p_two_sided(t, 1.0),
                     stats::student_t_p_closed_form(t, 1.0), 1e-9);
    ok = ok && close(stats::student_t_p_two_sided(t, 2.0),
                     stats::student_t_p_closed_form(t, 2.0), 1e-9);
  }
  report(5, ok,
         "welch t/df/p vs reference at 1e-6; df 1,2 closed forms at 1e-9",
         seconds_since(t0), 1.0);
}

// ---- criterion 7: property suites ----
void criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::ostringstream detail;

  // coverage monotonicity under suite extension
  {
    const GrammarSpec grammar = builtin_grammar(3);
    Rng rng(31337);
    int checked = 0;
    bool mono = true;
    while (checked < 20) {
      Genotype g(500);
      for (Codon& c : g) c = static_cast<Codon>(rng.below(256));
      const MapResult mapped = map_genotype(g, grammar, 3);
      if (!mapped.program) continue;
      ++checked;
      const CompiledProgram cp(*mapped.program);
      std::vector<TestCase> suite;
      double prev_s = -1, prev_b = -1;
      for (int i = 0; i < 8; ++i) {
        TestCase tc(3);
        for (Value& v : tc) v = rng.range(-1000000, 1000000);
        suite.push_back(tc);
        const CoverageReport r = run_suite(cp, suite);
        mono = mono && r.statement_pct >= prev_s && r.branch_pct >= prev_b;
        prev_s = r.statement_pct;
        prev_b = r.branch_pct;
      }
    }
    ok = ok && mono;
    detail << "monotonicity " << (mono ? "ok" : "VIOLATED");
  }

  // fitness dominance: strict covered-superset implies strictly greater fitness
  {
    const GrammarSpec grammar = builtin_grammar(3);
    Rng rng(5150);
    int exercised = 0;
    bool dominance = true;
    int tries = 0;
    while (exercised < 25 && tries < 400) {
      ++tries;
      Genotype g(500);
      for (Codon& c : g) c = static_cast<Codon>(rng.below(256));
      const MapResult mapped = map_genotype(g, grammar, 3);
      if (!mapped.program) continue;
      const CompiledProgram cp(*mapped.program);
      SuiteChromosome small, big;
      for (int i = 0; i < 3; ++i) {
        TestCase tc(3);
        for (Value& v : tc) v = rng.range(-1000000, 1000000);
        small.cases.push_back(tc);
        big.cases.push_back(tc);
      }
      TestCase extra(3);
      for (Value& v : extra) v = rng.range(-1000000, 1000000);
      big.cases.push_back(extra);
      for (Criterion crit : {Criterion::Statement, Criterion::Branch}) {
        const CoverageReport rs = run_suite(cp, small.cases);
        const CoverageReport rb = run_suite(cp, big.cases);
        const int small_units = crit == Criterion::Statement
                                    ? rs.covered_statements()
                                    : rs.covered_outcome_count();
        const int big_units = crit == Criterion::Statement
                                  ? rb.covered_statements()
                                  : rb.covered_outcome_count();
        if (big_units > small_units) {
          ++exercised;
          const double fs = suite_fitness(*mapped.program, small, crit);
          const double fb = suite_fitness(*mapped.program, big, crit);
          dominance = dominance && fb > fs;
        }
      }
    }
    ok = ok && dominance && exercised >= 25;
    detail << "; dominance " << (dominance ? "ok" : "VIOLATED") << " ("
           << exercised << " superset pairs)";
  }

  // elitism: best-per-generation history never decreases on a 25-branch SUT
  {
    GeConfig ge;
    ge.population_size = 50;
    ge.generations = 200;
    ge.target = {TargetSpec::Kind::Branches, 25};
    ge.initial_chromosome_size = 1100;
    ge.seed = 777;
    const auto evolved = evolve_programs(ge, 1);
    GaConfig ga;
    ga.population_size = 20;
    ga.generations = 50;
    ga.suite_size = 10;
    ga.criterion = Criterion::Branch;
    ga.seed = 4242;
    const SearchOutcome out = run_ga(evolved.front().program, ga);
    bool elitism_ok = true;
    for (std::size_t i = 1; i < out.best_fitness_history.size(); ++i)
      elitism_ok = elitism_ok &&
                   out.best_fitness_history[i] >= out.best_fitness_history[i - 1];
    ok = ok && elitism_ok;
    detail << "; elitism history " << (elitism_ok ? "ok" : "VIOLATED");
  }

  // roulette frequencies within +-0.02 over 10^4 draws
  {
    Rng rng(31415);
    const std::vector<double> uniform{0.0, 0.0};
    const std::vector<double> biased{1.0, 3.0};
    int u1 = 0, b1 = 0;
    for (int i = 0; i < 10000; ++i) u1 += roulette_select(uniform, rng) == 1;
    for (int i = 0; i < 10000; ++i) b1 += roulette_select(biased, rng) == 1;
    const bool freq_ok = std::fabs(u1 / 10000.0 - 0.5) <= 0.02 &&
                         std::fabs(b1 / 10000.0 - 0.75) <= 0.02;
    ok = ok && freq_ok;
    detail << "; roulette " << (freq_ok ? "ok" : "VIOLATED");
  }

  report(7, ok, detail.str(), seconds_since(t0), 0.0);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance_tests <path-to-sbstlab-cli>\n");
    return 64;
  }
  criterion1();
  criterion2();
  criterion3();
  criteria4and6(argv[1]);
  criterion5();
  criterion7();

  std::sort(g_lines.begin(), g_lines.end(),
            [](const Line& a, const Line& b) { return a.index < b.index; });
  int failures = 0;
  for (const Line& line : g_lines) {
    if (!line.ok) ++failures;
    std::printf("[%s] criterion %d: %s\n", line.ok ? "PASS" : "FAIL",
                line.index, line.text.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failures, g_lines.size());
  return failures;
}
