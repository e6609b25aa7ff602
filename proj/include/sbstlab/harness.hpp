#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sbstlab/ge.hpp"
#include "sbstlab/search.hpp"
#include "sbstlab/stats.hpp"

namespace sbstlab {

enum class Level { Low, Medium, High };

const char* to_string(Level level);

/// Full description of one factorial experiment: which coverage criteria,
/// the complexity targets per level, and every budget. Everything that can
/// influence the output is in here, so a plan plus a seed reproduces a run
/// byte for byte.
struct ExperimentPlan {
  std::vector<Criterion> criteria{Criterion::Statement, Criterion::Branch};
  std::vector<Level> levels{Level::Low, Level::Medium, Level::High};
  std::array<int, 3> statement_targets{75, 150, 300};
  std::array<int, 3> branch_targets{25, 50, 100};
  int programs_per_cell = 10;
  std::uint64_t master_seed = 42;
  int input_arity = 5;
  int suite_size = 10;
  Domain domain;
  ExecLimits limits;

  int ge_population = 50;
  int ge_generations = 200;
  int ge_chromosome = 0;  // 0 = scale with the target size
  int ge_max_wraps = 3;
  double ge_crossover = 0.9;
  double ge_mutation = 0.01;

  int ga_population = 20;
  int ga_generations = 50;
  double ga_crossover = 0.9;
  double ga_mutation = 0.25;  // desk scale runs hot; paper() resets to 0.02
  int ga_elitism = 1;

  int random_trials = 1000;

  int jobs = 0;  // worker threads; 0 = hardware concurrency

  /// Desk-scale profile: minutes, not days. This is the default.
  static ExperimentPlan desk();
  /// The full-scale profile (GE/GA 200x10000, random 100000).
  static ExperimentPlan paper();

  int target_for(Criterion criterion, Level level) const;
};

/// Throws std::invalid_argument when a plan breaks its own constraints.
void validate_plan(const ExperimentPlan& plan);

std::string plan_to_text(const ExperimentPlan& plan);
ExperimentPlan plan_from_text(const std::string& text);

struct ProgramResult {
  std::string file;  // suts/<criterion>-<level>-<index>.sut
  std::string text;  // canonical source, written to `file`
  std::uint64_t text_hash = 0;
  int target = 0;
  int achieved = 0;
  double ge_fitness = 0.0;
  bool within_tolerance = false;
  std::uint64_t ge_seed = 0;
  std::uint64_t ga_seed = 0;
  std::uint64_t rnd_seed = 0;
  double ga_coverage = 0.0;
  double rnd_coverage = 0.0;
  std::int64_t ga_evaluations = 0;
  std::int64_t rnd_evaluations = 0;
};

struct CellSummary {
  Criterion criterion = Criterion::Statement;
  Level level = Level::Low;
  int target = 0;
  stats::CellStats stats;
  std::vector<ProgramResult> per_program;
};

struct ExperimentResult {
  ExperimentPlan plan;
  std::vector<CellSummary> cells;
};

/// Runs the whole factorial experiment: per (criterion, level) cell, evolve
/// programs_per_cell SUTs, then run GA and random search on each with seeds
/// derived from the master seed, and summarize. GA and random always see the
/// same programs.
ExperimentResult run_experiment(const ExperimentPlan& plan);

/// summary.csv / per_program.csv (2-decimal presentation) plus *_raw.csv
/// twins at full precision.
void emit_csv(const ExperimentResult& result,
              const std::filesystem::path& run_dir);

/// One grouped-bar SVG per cell under figures/.
void emit_figures(const ExperimentResult& result,
                  const std::filesystem::path& run_dir);

/// Writes the complete run directory: suts/, manifest.csv, runs.csv,
/// plan.txt, the CSV reports and the figures.
void write_run_dir(const ExperimentResult& result,
                   const std::filesystem::path& run_dir);

/// Rebuilds an ExperimentResult from plan.txt + per_program_raw.csv, enough
/// to re-render summaries and figures.
ExperimentResult load_run_dir(const std::filesystem::path& run_dir);

std::uint64_t fnv1a_hash(std::string_view data);

}  // namespace sbstlab
