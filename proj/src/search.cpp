#include "sbstlab/search.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace sbstlab {

const char* to_string(Criterion c) {
  return c == Criterion::Statement ? "statement" : "branch";
}

double coverage_pct(const CoverageReport& report, Criterion criterion) {
  return criterion == Criterion::Statement ? report.statement_pct
                                           : report.branch_pct;
}

namespace {

int assigns_in(const std::vector<Stmt>& block) {
  int n = 0;
  for (const Stmt& s : block) {
    switch (s.kind) {
      case Stmt::Kind::Assign:
        ++n;
        break;
      case Stmt::Kind::If:
        n += assigns_in(s.body) + assigns_in(s.else_body);
        break;
      case Stmt::Kind::Loop:
        n += assigns_in(s.body);
        break;
    }
  }
  return n;
}

void collect_weights(const std::vector<Stmt>& block,
                     std::vector<std::array<int, 2>>& w) {
  for (const Stmt& s : block) {
    switch (s.kind) {
      case Stmt::Kind::Assign:
        break;
      case Stmt::Kind::If: {
        auto& entry = w[static_cast<std::size_t>(s.cond.branch_id)];
        entry[1] = std::max(1, assigns_in(s.body));
        entry[0] = s.has_else ? std::max(1, assigns_in(s.else_body)) : 1;
        collect_weights(s.body, w);
        collect_weights(s.else_body, w);
        break;
      }
      case Stmt::Kind::Loop: {
        auto& entry = w[static_cast<std::size_t>(s.cond.branch_id)];
        entry[1] = std::max(1, assigns_in(s.body));
        entry[0] = 1;
        collect_weights(s.body, w);
        break;
      }
    }
  }
}

double fitness_of(const CoverageReport& r, Criterion criterion,
                  const std::vector<std::array<int, 2>>& weights) {
  const int covered_units = criterion == Criterion::Statement
                                ? r.covered_statements()
                                : r.covered_outcome_count();
  const int uncovered = 2 * r.branch_count - r.covered_outcome_count();
  double guidance = 0.0;
  if (uncovered > 0) {
    for (int b = 0; b < r.branch_count; ++b) {
      for (int o = 0; o < 2; ++o) {
        const std::size_t idx = static_cast<std::size_t>(b) * 2 +
                                static_cast<std::size_t>(o);
        if (r.outcome_covered[idx]) continue;
        const Value d = r.min_distance[idx];
        if (d == kDistanceUnreached) continue;  // no signal at all
        const double scaled =
            criterion == Criterion::Statement
                ? static_cast<double>(d) /
                      weights[static_cast<std::size_t>(b)][static_cast<std::size_t>(o)]
                : static_cast<double>(d);
        guidance += 1.0 / (1.0 + scaled);
      }
    }
    guidance /= uncovered;
  }
  return covered_units + guidance;
}

void reset_report(CoverageReport& r) {
  std::fill(r.executed.begin(), r.executed.end(), 0);
  std::fill(r.outcome_covered.begin(), r.outcome_covered.end(), 0);
  std::fill(r.min_distance.begin(), r.min_distance.end(), kDistanceUnreached);
}

void finish_report(CoverageReport& r) {
  r.statement_pct = r.statement_count == 0
                        ? 100.0
                        : 100.0 * r.covered_statements() / r.statement_count;
  r.branch_pct =
      r.branch_count == 0
          ? 100.0
          : 100.0 * r.covered_outcome_count() / (2.0 * r.branch_count);
}

SuiteChromosome random_suite(int size, int arity, const Domain& domain,
                             Rng& rng) {
  SuiteChromosome s;
  s.cases.resize(static_cast<std::size_t>(size));
  for (TestCase& tc : s.cases) {
    tc.resize(static_cast<std::size_t>(arity));
    for (Value& v : tc) v = rng.range(domain.lo, domain.hi);
  }
  return s;
}

Value clamp_to(const Domain& d, __int128 v) {
  if (v < d.lo) return d.lo;
  if (v > d.hi) return d.hi;
  return static_cast<Value>(v);
}

// Mutation mixes exploration with neighborhood steps so distance guidance
// can actually pull values onto tight conditions (equalities) instead of
// relying on lucky uniform draws: 30% fresh uniform draw, 70% a step whose
// magnitude is log-uniform over 2^0 .. 2^20 in either direction.
Value mutate_value(Value v, const Domain& domain, Rng& rng) {
  if (rng.chance(0.3)) return rng.range(domain.lo, domain.hi);
  const int scale = static_cast<int>(rng.below(21));
  const auto magnitude = static_cast<__int128>(1 + rng.below(1ULL << scale));
  const __int128 stepped = rng.chance(0.5)
                               ? static_cast<__int128>(v) + magnitude
                               : static_cast<__int128>(v) - magnitude;
  return clamp_to(domain, stepped);
}

struct Evaluated {
  SuiteChromosome suite;
  double fitness = 0.0;
};

}  // namespace

std::vector<std::array<int, 2>> block_weights(const Program& program) {
  const Metrics m = compute_metrics(program);
  std::vector<std::array<int, 2>> w(static_cast<std::size_t>(m.branches),
                                    {1, 1});
  collect_weights(program.body, w);
  return w;
}

double suite_fitness(const Program& program, const SuiteChromosome& suite,
                     Criterion criterion, const ExecLimits& limits) {
  const CompiledProgram cp(program);
  const CoverageReport r = run_suite(cp, suite.cases, limits);
  return fitness_of(r, criterion, block_weights(program));
}

SearchOutcome run_ga(const Program& program, const GaConfig& config) {
  if (config.population_size < 2)
    throw std::invalid_argument("population_size must be >= 2");
  if (config.suite_size < 1)
    throw std::invalid_argument("suite_size must be >= 1");
  if (config.domain.lo >= config.domain.hi)
    throw std::invalid_argument("domain must satisfy lo < hi");

  const CompiledProgram cp(program);
  const auto weights = block_weights(program);
  const int units_total = config.criterion == Criterion::Statement
                              ? cp.statement_count()
                              : 2 * cp.branch_count();
  Rng rng(config.seed);

  CoverageReport scratch = cp.empty_report();
  std::int64_t evaluations = 0;
  const auto evaluate = [&](const SuiteChromosome& suite) {
    reset_report(scratch);
    for (const TestCase& tc : suite.cases)
      cp.run_into(tc, config.limits, scratch);
    ++evaluations;
    return fitness_of(scratch, config.criterion, weights);
  };

  std::vector<Evaluated> pop(static_cast<std::size_t>(config.population_size));
  for (Evaluated& e : pop) {
    e.suite = random_suite(config.suite_size, cp.input_arity(), config.domain,
                           rng);
    e.fitness = evaluate(e.suite);
  }

  SearchOutcome out;
  double best_fitness = -1.0;
  for (const Evaluated& e : pop) {
    if (e.fitness > best_fitness) {
      best_fitness = e.fitness;
      out.best_suite = e.suite;
    }
  }
  out.best_fitness_history.push_back(best_fitness);

  std::vector<double> sel(pop.size());
  for (int gen = 0;
       gen < config.generations && best_fitness < static_cast<double>(units_total);
       ++gen) {
    // Windowed roulette weights: raw suite fitness sits on a large common
    // baseline (the covered-unit count), which would flatten selection
    // pressure to nothing. Subtracting the generation minimum restores it;
    // a flat generation degenerates to uniform choice.
    double fmin = pop[0].fitness;
    for (const Evaluated& e : pop) fmin = std::min(fmin, e.fitness);
    for (std::size_t i = 0; i < pop.size(); ++i)
      sel[i] = pop[i].fitness - fmin;

    std::vector<Evaluated> next;
    next.reserve(pop.size());
    std::vector<std::size_t> order(pop.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return pop[a].fitness > pop[b].fitness;
                     });
    for (int e = 0; e < config.elitism && e < static_cast<int>(pop.size()); ++e)
      next.push_back(pop[order[static_cast<std::size_t>(e)]]);

    while (next.size() < pop.size()) {
      const Evaluated& pa = pop[roulette_select(sel, rng)];
      const Evaluated& pb = pop[roulette_select(sel, rng)];
      SuiteChromosome c1 = pa.suite;
      SuiteChromosome c2 = pb.suite;
      if (config.suite_size > 1 && rng.chance(config.crossover_rate)) {
        const std::size_t cut =
            1 + static_cast<std::size_t>(
                    rng.below(static_cast<std::uint64_t>(config.suite_size - 1)));
        for (std::size_t i = cut; i < c1.cases.size(); ++i)
          std::swap(c1.cases[i], c2.cases[i]);
      }
      for (SuiteChromosome* child : {&c1, &c2}) {
        for (TestCase& tc : child->cases)
          for (Value& v : tc)
            if (rng.chance(config.mutation_rate))
              v = mutate_value(v, config.domain, rng);
      }
      next.push_back({std::move(c1), 0.0});
      if (next.size() < pop.size()) next.push_back({std::move(c2), 0.0});
    }

    pop = std::move(next);
    for (std::size_t i = 0; i < pop.size(); ++i) {
      if (static_cast<int>(i) < config.elitism) continue;  // fitness cached
      pop[i].fitness = evaluate(pop[i].suite);
    }
    for (const Evaluated& e : pop) {
      if (e.fitness > best_fitness) {
        best_fitness = e.fitness;
        out.best_suite = e.suite;
      }
    }
    out.best_fitness_history.push_back(best_fitness);
  }

  reset_report(scratch);
  for (const TestCase& tc : out.best_suite.cases)
    cp.run_into(tc, config.limits, scratch);
  finish_report(scratch);
  out.best_coverage_pct = coverage_pct(scratch, config.criterion);
  out.evaluations_used = evaluations;
  return out;
}

SearchOutcome run_random(const Program& program, const RandomConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (config.suite_size < 1)
    throw std::invalid_argument("suite_size must be >= 1");
  if (config.domain.lo >= config.domain.hi)
    throw std::invalid_argument("domain must satisfy lo < hi");

  const CompiledProgram cp(program);
  Rng rng(config.seed);
  CoverageReport scratch = cp.empty_report();

  SearchOutcome out;
  out.best_coverage_pct = -1.0;
  for (int trial = 0; trial < config.trials; ++trial) {
    SuiteChromosome suite =
        random_suite(config.suite_size, cp.input_arity(), config.domain, rng);
    reset_report(scratch);
    for (const TestCase& tc : suite.cases)
      cp.run_into(tc, config.limits, scratch);
    finish_report(scratch);
    const double pct = coverage_pct(scratch, config.criterion);
    ++out.evaluations_used;
    if (pct > out.best_coverage_pct) {
      out.best_coverage_pct = pct;
      out.best_suite = std::move(suite);
      if (pct >= 100.0) break;  // cannot improve further
    }
  }
  return out;
}

}  // namespace sbstlab
