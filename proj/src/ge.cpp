#include "sbstlab/ge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "sbstlab/rng.hpp"
#include "sbstlab/text.hpp"

namespace sbstlab {

const char* to_string(TargetSpec::Kind kind) {
  return kind == TargetSpec::Kind::Statements ? "statements" : "branches";
}

MapResult map_genotype(const Genotype& genotype, const GrammarSpec& grammar,
                       int max_wraps) {
  if (genotype.empty()) throw std::invalid_argument("empty genotype");
  if (max_wraps < 1) throw std::invalid_argument("max_wraps must be >= 1");

  MapResult out;

  // Leftmost derivation over an explicit stack (top = leftmost symbol).
  std::vector<GrammarSpec::Symbol> stack;
  stack.push_back({false, "", grammar.start});

  std::string text = "program ge(";
  for (int i = 0; i < grammar.input_arity; ++i) {
    if (i > 0) text += ", ";
    text += input_name(i);
  }
  text += ")\n{\n";

  std::size_t pos = 0;
  int wraps = 0;
  while (!stack.empty()) {
    const GrammarSpec::Symbol sym = stack.back();
    stack.pop_back();
    if (sym.terminal) {
      text += sym.text;
      text += ' ';
      continue;
    }
    if (pos == genotype.size()) {
      if (wraps == max_wraps) {
        out.wraps_exhausted = true;
        return out;
      }
      ++wraps;
      pos = 0;
    }
    const Codon codon = genotype[pos++];
    const auto& productions =
        grammar.rules[static_cast<std::size_t>(sym.rule)].productions;
    const auto& chosen = productions[codon % productions.size()];
    for (auto it = chosen.rbegin(); it != chosen.rend(); ++it)
      stack.push_back(*it);
  }
  text += "\n}\n";

  out.program = parse(text);
  return out;
}

double ge_fitness(const Metrics& metrics, TargetSpec target) {
  const int metric = target.kind == TargetSpec::Kind::Statements
                         ? metrics.statements
                         : metrics.branches;
  return std::fabs(static_cast<double>(metric - target.value));
}

double ge_fitness(const Program& program, TargetSpec target) {
  return ge_fitness(compute_metrics(program), target);
}

namespace {

constexpr double kFailureScore = std::numeric_limits<double>::infinity();

struct Individual {
  Genotype genotype;
  double score = kFailureScore;
};

Genotype random_genotype(int length, Rng& rng) {
  Genotype g(static_cast<std::size_t>(length));
  for (Codon& c : g) c = static_cast<Codon>(rng.below(256));
  return g;
}

// Single-point crossover with independent cut points, so genotype lengths
// drift across generations.
std::pair<Genotype, Genotype> crossover(const Genotype& a, const Genotype& b,
                                        std::size_t max_len, Rng& rng) {
  const std::size_t ca = 1 + static_cast<std::size_t>(rng.below(a.size()));
  const std::size_t cb = 1 + static_cast<std::size_t>(rng.below(b.size()));
  Genotype c1(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(ca));
  c1.insert(c1.end(), b.begin() + static_cast<std::ptrdiff_t>(cb), b.end());
  Genotype c2(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(cb));
  c2.insert(c2.end(), a.begin() + static_cast<std::ptrdiff_t>(ca), a.end());
  if (c1.size() > max_len) c1.resize(max_len);
  if (c2.size() > max_len) c2.resize(max_len);
  return {std::move(c1), std::move(c2)};
}

void mutate(Genotype& g, double rate, Rng& rng) {
  for (Codon& c : g)
    if (rng.chance(rate)) c = static_cast<Codon>(rng.below(256));
}

struct RunResult {
  std::optional<Program> best_program;
  double best_score = kFailureScore;
  std::vector<double> history;
};

RunResult run_ge(const GeConfig& cfg, const GrammarSpec& grammar,
                 std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t max_len =
      static_cast<std::size_t>(cfg.initial_chromosome_size) * 4;

  std::vector<Individual> pop(static_cast<std::size_t>(cfg.population_size));
  for (Individual& ind : pop)
    ind.genotype = random_genotype(cfg.initial_chromosome_size, rng);

  RunResult result;
  const auto evaluate = [&](Individual& ind) {
    MapResult mapped = map_genotype(ind.genotype, grammar, cfg.max_wraps);
    if (!mapped.program) {
      ind.score = kFailureScore;
      return;
    }
    ind.score = ge_fitness(*mapped.program, cfg.target);
    if (ind.score < result.best_score || !result.best_program) {
      result.best_score = ind.score;
      result.best_program = std::move(mapped.program);
    }
  };

  for (Individual& ind : pop) evaluate(ind);
  result.history.push_back(result.best_score);
  if (result.best_score == 0.0) return result;

  std::vector<double> weights(pop.size());
  for (int gen = 0; gen < cfg.generations; ++gen) {
    for (std::size_t i = 0; i < pop.size(); ++i)
      weights[i] = std::isinf(pop[i].score) ? 0.0 : 1.0 / (1.0 + pop[i].score);

    std::vector<Individual> next;
    next.reserve(pop.size());
    // elites: best `elitism` individuals, first-encountered wins ties
    std::vector<std::size_t> order(pop.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return pop[a].score < pop[b].score;
    });
    for (int e = 0; e < cfg.elitism && e < static_cast<int>(pop.size()); ++e)
      next.push_back(pop[order[static_cast<std::size_t>(e)]]);

    while (next.size() < pop.size()) {
      const std::size_t pa = roulette_select(weights, rng);
      const std::size_t pb = roulette_select(weights, rng);
      Genotype c1 = pop[pa].genotype;
      Genotype c2 = pop[pb].genotype;
      if (rng.chance(cfg.crossover_rate)) {
        auto [x1, x2] = crossover(c1, c2, max_len, rng);
        c1 = std::move(x1);
        c2 = std::move(x2);
      }
      mutate(c1, cfg.mutation_rate, rng);
      next.push_back({std::move(c1), kFailureScore});
      if (next.size() < pop.size()) {
        mutate(c2, cfg.mutation_rate, rng);
        next.push_back({std::move(c2), kFailureScore});
      }
    }
    pop = std::move(next);
    for (std::size_t i = 0; i < pop.size(); ++i) {
      // elites keep their evaluated score
      if (static_cast<int>(i) < cfg.elitism && std::isfinite(pop[i].score))
        continue;
      evaluate(pop[i]);
    }
    result.history.push_back(result.best_score);
    if (result.best_score == 0.0) break;
  }
  return result;
}

}  // namespace

std::vector<EvolvedProgram> evolve_programs(const GeConfig& config, int count) {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  if (config.population_size < 2)
    throw std::invalid_argument("population_size must be >= 2");

  const GrammarSpec grammar = builtin_grammar(config.input_arity);
  std::vector<EvolvedProgram> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int run = 0; run < count; ++run) {
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(run);
    RunResult r = run_ge(config, grammar, seed);
    if (!r.best_program)
      throw std::runtime_error(
          "program generation produced no valid program (seed " +
          std::to_string(seed) + ")");
    EvolvedProgram ev;
    ev.program = std::move(*r.best_program);
    ev.target = config.target;
    const Metrics m = compute_metrics(ev.program);
    ev.achieved = config.target.kind == TargetSpec::Kind::Statements
                      ? m.statements
                      : m.branches;
    ev.fitness = r.best_score;
    ev.seed = seed;
    ev.within_tolerance =
        r.best_score <= 0.05 * static_cast<double>(config.target.value);
    ev.best_fitness_history = std::move(r.history);
    out.push_back(std::move(ev));
  }
  return out;
}

}  // namespace sbstlab
