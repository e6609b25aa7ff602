#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sbstlab/ast.hpp"
#include "sbstlab/grammar.hpp"

namespace sbstlab {

/// One codon: an integer in [0, 255] selecting among a rule's productions.
using Codon = std::uint8_t;

/// Codon sequence. Starts at the configured chromosome size and may change
/// length through crossover.
using Genotype = std::vector<Codon>;

/// Size target for generated programs.
struct TargetSpec {
  enum class Kind { Statements, Branches };
  Kind kind = Kind::Statements;
  int value = 75;
};

const char* to_string(TargetSpec::Kind kind);

struct GeConfig {
  int population_size = 200;
  int generations = 10000;
  int initial_chromosome_size = 200;
  int max_wraps = 3;
  double crossover_rate = 0.9;
  double mutation_rate = 0.01;
  int elitism = 1;
  TargetSpec target;
  int input_arity = 5;
  std::uint64_t seed = 0;
};

struct MapResult {
  std::optional<Program> program;
  bool wraps_exhausted = false;  // set when mapping failed
};

/// Canonical genotype-to-program mapping: repeatedly expand the leftmost
/// nonterminal, choosing production (codon mod production-count) and
/// consuming one codon per expansion (single-production rules included).
/// On codon exhaustion the read position wraps to 0, at most max_wraps
/// times; if nonterminals remain afterwards the mapping fails.
MapResult map_genotype(const Genotype& genotype, const GrammarSpec& grammar,
                       int max_wraps);

/// Distance of a program's size metric from the target; 0 is a perfect hit.
double ge_fitness(const Metrics& metrics, TargetSpec target);
double ge_fitness(const Program& program, TargetSpec target);

/// One evolved program plus the run record behind it.
struct EvolvedProgram {
  Program program;
  TargetSpec target;
  int achieved = 0;
  double fitness = 0.0;  // |achieved - target.value|
  std::uint64_t seed = 0;
  bool within_tolerance = false;  // |achieved - target| <= 5% of target
  std::vector<double> best_fitness_history;  // best score per generation
};

/// Runs `count` independent GE searches (run i is seeded config.seed + i)
/// and returns each run's best valid program. Every returned program passes
/// validate(). Throws if a run produced no valid program at all.
std::vector<EvolvedProgram> evolve_programs(const GeConfig& config, int count);

}  // namespace sbstlab
