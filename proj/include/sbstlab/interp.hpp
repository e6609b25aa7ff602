#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "sbstlab/ast.hpp"

namespace sbstlab {

/// One test case: the k input values of the program.
using TestCase = std::vector<Value>;

struct ExecLimits {
  int max_loop_iterations = 1000;
  std::int64_t max_total_steps = 1'000'000;
};

enum class Termination { Normal, OverflowHalt, StepLimit };

/// Marks a (branch, outcome) pair whose condition was never evaluated.
inline constexpr Value kDistanceUnreached = -1;

/// Korel-style minimization distance with K = 1: zero iff the desired
/// outcome already holds for (left rel right), otherwise how far the
/// operands are from flipping it. Computed in 128-bit arithmetic and
/// saturated to the maximum representable value.
Value branch_distance(Rel rel, Value left, Value right, bool desired);
Value branch_distance(const Cond& cond, Value left, Value right, bool desired);

/// Execution record of a single test case. Indexing is by the dense
/// pre-order ids: executed by stmt_id (assignments only), outcomes and
/// distances by branch_id * 2 + outcome (false = 0, true = 1).
struct TraceResult {
  std::vector<std::uint8_t> executed;
  std::vector<std::uint8_t> outcome_covered;
  std::vector<Value> min_distance;  // kDistanceUnreached if never evaluated
  Termination termination = Termination::Normal;

  std::vector<int> executed_stmt_ids() const;
  std::vector<std::pair<int, bool>> covered_outcomes() const;
};

/// Suite-level union of traces plus coverage percentages.
struct CoverageReport {
  int statement_count = 0;
  int branch_count = 0;
  std::vector<std::uint8_t> executed;
  std::vector<std::uint8_t> outcome_covered;
  std::vector<Value> min_distance;  // suite-wide minima
  double statement_pct = 0.0;
  double branch_pct = 0.0;

  int covered_statements() const;
  int covered_outcome_count() const;
};

/// A program lowered to a flat instruction list for repeated execution.
/// Compile once, run many test cases.
class CompiledProgram {
 public:
  explicit CompiledProgram(const Program& p);

  int input_arity() const { return input_arity_; }
  int statement_total() const { return stmt_total_; }
  int statement_count() const { return statement_count_; }
  int branch_count() const { return branch_count_; }
  int loop_count() const { return loop_count_; }

  TraceResult run(const TestCase& input, const ExecLimits& limits = {}) const;

  /// Runs one case, folding coverage into an existing report (union of
  /// executed/outcomes, minimum of distances).
  Termination run_into(const TestCase& input, const ExecLimits& limits,
                       CoverageReport& acc) const;

  /// Fresh all-uncovered report sized for this program.
  CoverageReport empty_report() const;

 private:
  enum class Op : std::uint8_t {
    Mark,  // statement/condition entry: step accounting + executed flag
    PushConst,
    PushVar,
    Add,
    Sub,
    Mul,
    Store,
    Branch,
    Jump,
    IterCheck,
  };
  struct Insn {
    Op op;
    Rel rel = Rel::Lt;
    std::int32_t a = 0;  // slot / branch_id / loop index
    std::int32_t b = 0;  // jump target / stmt_id
    Value imm = 0;
  };

  void compile_block(const std::vector<Stmt>& block);
  void compile_expr(const Expr& e);
  int slot_for(const std::string& name);

  std::vector<Insn> code_;
  int input_arity_ = 0;
  int slot_total_ = 0;
  int stmt_total_ = 0;       // all statement nodes (id space)
  int statement_count_ = 0;  // assignments
  int branch_count_ = 0;
  int loop_count_ = 0;
  int loop_seen_ = 0;     // compile-time loop numbering
  int stack_depth_ = 0;   // current operand depth while compiling
  int stack_need_ = 0;    // maximum operand depth of any expression
  std::vector<std::string> slot_names_;
};

/// Interprets the program on one test case with coverage instrumentation.
/// Throws std::invalid_argument if the input arity does not match.
TraceResult execute(const Program& p, const TestCase& input,
                    const ExecLimits& limits = {});

/// Coverage of a whole suite: union of executed statements and covered
/// outcomes, per-outcome minimum distances. Throws on an empty suite or
/// an arity mismatch.
CoverageReport run_suite(const Program& p, std::span<const TestCase> suite,
                         const ExecLimits& limits = {});
CoverageReport run_suite(const CompiledProgram& cp,
                         std::span<const TestCase> suite,
                         const ExecLimits& limits = {});

/// Debug dump of recorded distances, one row per (branch, outcome):
/// `branchId,outcome,minDistance`. Unreached outcomes show an empty
/// distance field.
std::string trace_csv(const CoverageReport& report);

}  // namespace sbstlab
