#pragma once

#include <cstdint>
#include <vector>

#include "sbstlab/ast.hpp"
#include "sbstlab/interp.hpp"
#include "sbstlab/rng.hpp"

namespace sbstlab {

enum class Criterion { Statement, Branch };

const char* to_string(Criterion c);

/// Test input domain, inclusive on both ends.
struct Domain {
  Value lo = -1'000'000;
  Value hi = 1'000'000;
};

/// The GA individual: a whole test suite of m cases (each case is one gene).
struct SuiteChromosome {
  std::vector<TestCase> cases;
};

struct GaConfig {
  int population_size = 200;
  int generations = 10000;
  int suite_size = 10;
  Domain domain;
  double crossover_rate = 0.9;
  double mutation_rate = 0.02;
  int elitism = 1;
  Criterion criterion = Criterion::Branch;
  std::uint64_t seed = 0;
  ExecLimits limits;
};

struct RandomConfig {
  int trials = 100'000;
  int suite_size = 10;
  Domain domain;
  Criterion criterion = Criterion::Branch;
  std::uint64_t seed = 0;
  ExecLimits limits;
};

struct SearchOutcome {
  SuiteChromosome best_suite;
  double best_coverage_pct = 0.0;
  std::int64_t evaluations_used = 0;  // suite evaluations actually performed
  std::vector<double> best_fitness_history;  // GA: best fitness per generation
};

/// Coverage percentage of the report under the given criterion.
double coverage_pct(const CoverageReport& report, Criterion criterion);

/// Suite fitness: covered units + a guidance term in [0, 1) built from the
/// residual branch distances of uncovered outcomes. For the statement
/// criterion each distance is first divided by the number of assignments in
/// the block the outcome guards (minimum weight 1). Coverage always
/// dominates: a strict superset of covered units wins.
double suite_fitness(const Program& program, const SuiteChromosome& suite,
                     Criterion criterion, const ExecLimits& limits = {});

/// Per-outcome distance weights for the statement criterion.
std::vector<std::array<int, 2>> block_weights(const Program& program);

SearchOutcome run_ga(const Program& program, const GaConfig& config);
SearchOutcome run_random(const Program& program, const RandomConfig& config);

}  // namespace sbstlab
