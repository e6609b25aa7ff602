#include <doctest.h>

#include "../common/near.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sbstlab/harness.hpp"
#include "sbstlab/rng.hpp"
#include "sbstlab/stats.hpp"
#include "sbstlab/text.hpp"

using namespace sbstlab;

namespace fs = std::filesystem;

namespace {

ExperimentPlan tiny_plan() {
  ExperimentPlan plan = ExperimentPlan::desk();
  plan.criteria = {Criterion::Statement};
  plan.statement_targets = {6, 9, 12};
  plan.branch_targets = {2, 4, 6};
  plan.programs_per_cell = 2;
  plan.master_seed = 7;
  plan.input_arity = 2;
  plan.suite_size = 4;
  plan.ge_population = 16;
  plan.ge_generations = 60;
  plan.ge_chromosome = 200;
  plan.ga_population = 6;
  plan.ga_generations = 8;
  plan.random_trials = 30;
  plan.jobs = 2;
  return plan;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_occurrences(const std::string& text, const std::string& needle) {
  int n = 0;
  for (std::size_t at = text.find(needle); at != std::string::npos;
       at = text.find(needle, at + needle.size()))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("plan text round-trips") {
  const ExperimentPlan plan = tiny_plan();
  const std::string text = plan_to_text(plan);
  const ExperimentPlan back = plan_from_text(text);
  CHECK(plan_to_text(back) == text);
  CHECK(back.master_seed == plan.master_seed);
  CHECK(back.programs_per_cell == plan.programs_per_cell);
  CHECK(back.criteria == plan.criteria);
  CHECK(back.levels == plan.levels);

  CHECK_THROWS_AS(plan_from_text("nonsense = 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(plan_from_text("domain = backwards\n"), std::invalid_argument);

  ExperimentPlan bad = plan;
  bad.programs_per_cell = 1;
  CHECK_THROWS_AS(validate_plan(bad), std::invalid_argument);
  bad = plan;
  bad.statement_targets = {10, 10, 12};
  CHECK_THROWS_AS(validate_plan(bad), std::invalid_argument);
}

TEST_CASE("a small experiment produces consistent cells and files") {
  const ExperimentPlan plan = tiny_plan();
  const ExperimentResult result = run_experiment(plan);

  REQUIRE(result.cells.size() == 3);  // one criterion, three levels
  for (const CellSummary& cell : result.cells) {
    REQUIRE(cell.per_program.size() == 2);
    std::vector<double> ga, rnd;
    for (const ProgramResult& r : cell.per_program) {
      ga.push_back(r.ga_coverage);
      rnd.push_back(r.rnd_coverage);
      CHECK(r.text_hash == fnv1a_hash(r.text));
      // the stored text is a valid program hitting the recorded metric
      const Program p = parse(r.text);
      CHECK(compute_metrics(p).statements == r.achieved);
      CHECK(r.ga_seed ==
            derive_seed(plan.master_seed,
                        std::string(to_string(cell.criterion)) + "/" +
                            to_string(cell.level) + "/" +
                            std::to_string(&r - cell.per_program.data()) +
                            "/ga"));
    }
    // the cell stats are exactly the stats of the per-program vectors
    const stats::CellStats expect = stats::summarize_cell(ga, rnd);
    CHECK(near(cell.stats.ga_mean, expect.ga_mean, 1e-9));
    CHECK(near(cell.stats.rnd_mean, expect.rnd_mean, 1e-9));
    CHECK(near(cell.stats.actual_cl, expect.actual_cl, 1e-9));
  }

  const fs::path dir = fs::temp_directory_path() / "sbstlab_test_run";
  fs::remove_all(dir);
  write_run_dir(result, dir);
  for (const char* name :
       {"summary.csv", "summary_raw.csv", "per_program.csv",
        "per_program_raw.csv", "manifest.csv", "runs.csv", "plan.txt"})
    CHECK(fs::exists(dir / name));

  const std::string summary = slurp(dir / "summary.csv");
  CHECK(summary.rfind(
            "criterion,level,target,ga_mean,ga_std,rnd_mean,rnd_std,actual_cl\n",
            0) == 0);
  CHECK(count_occurrences(summary, "\n") == 4);  // header + 3 cells

  const std::string pp = slurp(dir / "per_program.csv");
  CHECK(pp.rfind("criterion,level,program,ga_coverage,rnd_coverage\n", 0) == 0);
  CHECK(count_occurrences(pp, "\n") == 7);  // header + 3*2 programs

  // every .sut file exists and parses
  const std::string manifest = slurp(dir / "manifest.csv");
  CHECK(manifest.rfind("file,targetKind,targetValue,achievedValue,geFitness,seed\n",
                       0) == 0);
  for (const CellSummary& cell : result.cells)
    for (const ProgramResult& r : cell.per_program) {
      CHECK(fs::exists(dir / r.file));
      CHECK(parse(slurp(dir / r.file)).input_arity == plan.input_arity);
    }

  // figures: one per cell, two bars per program
  for (const CellSummary& cell : result.cells) {
    const fs::path fig = dir / "figures" /
                         (std::string(to_string(cell.criterion)) + "-" +
                          to_string(cell.level) + ".svg");
    REQUIRE(fs::exists(fig));
    const std::string svg = slurp(fig);
    CHECK(count_occurrences(svg, "class=\"ga\"") == 2);
    CHECK(count_occurrences(svg, "class=\"rnd\"") == 2);
  }

  // reload from raw files and re-derive the summaries
  const ExperimentResult reloaded = load_run_dir(dir);
  REQUIRE(reloaded.cells.size() == result.cells.size());
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    CHECK(near(reloaded.cells[i].stats.ga_mean, result.cells[i].stats.ga_mean,
               1e-9));
    CHECK(near(reloaded.cells[i].stats.actual_cl,
               result.cells[i].stats.actual_cl, 1e-9));
  }
  fs::remove_all(dir);
}

TEST_CASE("same seed, same bytes; different seed, different run") {
  ExperimentPlan plan = tiny_plan();
  plan.criteria = {Criterion::Branch};
  plan.levels = {Level::Low};

  const ExperimentResult a = run_experiment(plan);
  plan.jobs = 1;  // worker count must not affect results
  const ExperimentResult b = run_experiment(plan);

  const fs::path da = fs::temp_directory_path() / "sbstlab_det_a";
  const fs::path db = fs::temp_directory_path() / "sbstlab_det_b";
  fs::remove_all(da);
  fs::remove_all(db);
  write_run_dir(a, da);
  write_run_dir(b, db);
  for (const char* name : {"summary.csv", "per_program.csv", "manifest.csv",
                           "runs.csv", "summary_raw.csv"})
    CHECK(slurp(da / name) == slurp(db / name));

  plan.master_seed = 8;
  const ExperimentResult c = run_experiment(plan);
  CHECK(c.cells[0].per_program[0].text_hash != a.cells[0].per_program[0].text_hash);
  fs::remove_all(da);
  fs::remove_all(db);
}
