#include "sbstlab/interp.hpp"

#include <stdexcept>
#include <unordered_map>

namespace sbstlab {

namespace {

Rel negate(Rel rel) {
  switch (rel) {
    case Rel::Lt: return Rel::Ge;
    case Rel::Le: return Rel::Gt;
    case Rel::Gt: return Rel::Le;
    case Rel::Ge: return Rel::Lt;
    case Rel::Eq: return Rel::Ne;
    case Rel::Ne: return Rel::Eq;
  }
  return Rel::Lt;
}

}  // namespace

Value branch_distance(Rel rel, Value left, Value right, bool desired) {
  const Rel eff = desired ? rel : negate(rel);
  using Wide = __int128;
  const Wide a = left;
  const Wide b = right;
  Wide d = 0;
  switch (eff) {
    case Rel::Ge: d = (a >= b) ? 0 : b - a; break;
    case Rel::Gt: d = (a > b) ? 0 : b - a + 1; break;
    case Rel::Le: d = (a <= b) ? 0 : a - b; break;
    case Rel::Lt: d = (a < b) ? 0 : a - b + 1; break;
    case Rel::Eq: d = (a == b) ? 0 : (a > b ? a - b : b - a); break;
    case Rel::Ne: d = (a != b) ? 0 : 1; break;
  }
  constexpr Wide kMax = std::numeric_limits<Value>::max();
  return d > kMax ? std::numeric_limits<Value>::max() : static_cast<Value>(d);
}

Value branch_distance(const Cond& cond, Value left, Value right, bool desired) {
  return branch_distance(cond.rel, left, right, desired);
}

std::vector<int> TraceResult::executed_stmt_ids() const {
  std::vector<int> ids;
  for (std::size_t i = 0; i < executed.size(); ++i)
    if (executed[i]) ids.push_back(static_cast<int>(i));
  return ids;
}

std::vector<std::pair<int, bool>> TraceResult::covered_outcomes() const {
  std::vector<std::pair<int, bool>> out;
  for (std::size_t i = 0; i < outcome_covered.size(); ++i)
    if (outcome_covered[i]) out.emplace_back(static_cast<int>(i / 2), i % 2 == 1);
  return out;
}

int CoverageReport::covered_statements() const {
  int n = 0;
  for (std::uint8_t e : executed) n += e != 0;
  return n;
}

int CoverageReport::covered_outcome_count() const {
  int n = 0;
  for (std::uint8_t c : outcome_covered) n += c != 0;
  return n;
}

CompiledProgram::CompiledProgram(const Program& p) {
  input_arity_ = p.input_arity;
  for (int i = 0; i < p.input_arity; ++i) slot_names_.push_back(input_name(i));
  slot_total_ = p.input_arity;
  const Metrics m = compute_metrics(p);
  statement_count_ = m.statements;
  branch_count_ = m.branches;
  loop_count_ = m.loops;
  // stmt id space covers every statement node
  stmt_total_ = m.statements + m.branches;  // ifs+loops == branches (1 cond each)
  compile_block(p.body);
}

int CompiledProgram::slot_for(const std::string& name) {
  for (std::size_t i = 0; i < slot_names_.size(); ++i)
    if (slot_names_[i] == name) return static_cast<int>(i);
  slot_names_.push_back(name);
  return slot_total_++;
}

void CompiledProgram::compile_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Const:
      code_.push_back({Op::PushConst, Rel::Lt, 0, 0, e.literal});
      if (++stack_depth_ > stack_need_) stack_need_ = stack_depth_;
      break;
    case Expr::Kind::Var:
      code_.push_back({Op::PushVar, Rel::Lt, slot_for(e.var), 0, 0});
      if (++stack_depth_ > stack_need_) stack_need_ = stack_depth_;
      break;
    case Expr::Kind::Bin:
      compile_expr(e.left());
      compile_expr(e.right());
      switch (e.op) {
        case BinOp::Add: code_.push_back({Op::Add, Rel::Lt, 0, 0, 0}); break;
        case BinOp::Sub: code_.push_back({Op::Sub, Rel::Lt, 0, 0, 0}); break;
        case BinOp::Mul: code_.push_back({Op::Mul, Rel::Lt, 0, 0, 0}); break;
      }
      --stack_depth_;
      break;
  }
}

void CompiledProgram::compile_block(const std::vector<Stmt>& block) {
  for (const Stmt& s : block) {
    switch (s.kind) {
      case Stmt::Kind::Assign: {
        code_.push_back({Op::Mark, Rel::Lt, 0, s.stmt_id, 0});
        compile_expr(s.value);
        code_.push_back({Op::Store, Rel::Lt, slot_for(s.target), 0, 0});
        --stack_depth_;
        break;
      }
      case Stmt::Kind::If: {
        code_.push_back({Op::Mark, Rel::Lt, 0, -1, 0});
        compile_expr(s.cond.lhs);
        compile_expr(s.cond.rhs);
        const auto branch_at = code_.size();
        code_.push_back({Op::Branch, s.cond.rel, s.cond.branch_id, 0, 0});
        stack_depth_ -= 2;
        compile_block(s.body);
        if (s.has_else) {
          const auto jump_at = code_.size();
          code_.push_back({Op::Jump, Rel::Lt, 0, 0, 0});
          code_[branch_at].b = static_cast<std::int32_t>(code_.size());
          compile_block(s.else_body);
          code_[jump_at].b = static_cast<std::int32_t>(code_.size());
        } else {
          code_[branch_at].b = static_cast<std::int32_t>(code_.size());
        }
        break;
      }
      case Stmt::Kind::Loop: {
        const int loop_index = loop_seen_++;
        const auto head = code_.size();
        const auto iter_at = code_.size();
        code_.push_back({Op::IterCheck, Rel::Lt, loop_index, 0, 0});
        code_.push_back({Op::Mark, Rel::Lt, 0, -1, 0});
        compile_expr(s.cond.lhs);
        compile_expr(s.cond.rhs);
        const auto branch_at = code_.size();
        code_.push_back({Op::Branch, s.cond.rel, s.cond.branch_id, 0, 0});
        stack_depth_ -= 2;
        compile_block(s.body);
        code_.push_back({Op::Jump, Rel::Lt, 0,
                         static_cast<std::int32_t>(head), 0});
        const auto exit = static_cast<std::int32_t>(code_.size());
        code_[iter_at].b = exit;
        code_[branch_at].b = exit;
        break;
      }
    }
  }
}

CoverageReport CompiledProgram::empty_report() const {
  CoverageReport r;
  r.statement_count = statement_count_;
  r.branch_count = branch_count_;
  r.executed.assign(static_cast<std::size_t>(stmt_total_), 0);
  r.outcome_covered.assign(static_cast<std::size_t>(branch_count_) * 2, 0);
  r.min_distance.assign(static_cast<std::size_t>(branch_count_) * 2,
                        kDistanceUnreached);
  return r;
}

Termination CompiledProgram::run_into(const TestCase& input,
                                      const ExecLimits& limits,
                                      CoverageReport& acc) const {
  if (static_cast<int>(input.size()) != input_arity_)
    throw std::invalid_argument(
        "test case arity " + std::to_string(input.size()) +
        " does not match program arity " + std::to_string(input_arity_));

  std::vector<Value> slots(static_cast<std::size_t>(slot_total_), 0);
  for (int i = 0; i < input_arity_; ++i)
    slots[static_cast<std::size_t>(i)] = input[static_cast<std::size_t>(i)];
  std::vector<std::int32_t> iters(static_cast<std::size_t>(loop_count_), 0);
  std::vector<Value> stack_buf(static_cast<std::size_t>(stack_need_) + 1);
  Value* stack = stack_buf.data();
  int sp = 0;
  std::int64_t steps = 0;

  std::size_t pc = 0;
  const std::size_t n = code_.size();
  while (pc < n) {
    const Insn& in = code_[pc];
    switch (in.op) {
      case Op::Mark:
        if (++steps > limits.max_total_steps) return Termination::StepLimit;
        if (in.b >= 0) acc.executed[static_cast<std::size_t>(in.b)] = 1;
        ++pc;
        break;
      case Op::PushConst:
        stack[sp++] = in.imm;
        ++pc;
        break;
      case Op::PushVar:
        stack[sp++] = slots[static_cast<std::size_t>(in.a)];
        ++pc;
        break;
      case Op::Add: {
        Value r;
        --sp;
        if (__builtin_add_overflow(stack[sp - 1], stack[sp], &r))
          return Termination::OverflowHalt;
        stack[sp - 1] = r;
        ++pc;
        break;
      }
      case Op::Sub: {
        Value r;
        --sp;
        if (__builtin_sub_overflow(stack[sp - 1], stack[sp], &r))
          return Termination::OverflowHalt;
        stack[sp - 1] = r;
        ++pc;
        break;
      }
      case Op::Mul: {
        Value r;
        --sp;
        if (__builtin_mul_overflow(stack[sp - 1], stack[sp], &r))
          return Termination::OverflowHalt;
        stack[sp - 1] = r;
        ++pc;
        break;
      }
      case Op::Store:
        slots[static_cast<std::size_t>(in.a)] = stack[--sp];
        ++pc;
        break;
      case Op::Branch: {
        const Value right = stack[--sp];
        const Value left = stack[--sp];
        const Value dist_true = branch_distance(in.rel, left, right, true);
        const Value dist_false = branch_distance(in.rel, left, right, false);
        const bool taken = dist_true == 0;
        const std::size_t base = static_cast<std::size_t>(in.a) * 2;
        acc.outcome_covered[base + (taken ? 1 : 0)] = 1;
        Value& mf = acc.min_distance[base];
        Value& mt = acc.min_distance[base + 1];
        if (mt == kDistanceUnreached || dist_true < mt) mt = dist_true;
        if (mf == kDistanceUnreached || dist_false < mf) mf = dist_false;
        pc = taken ? pc + 1 : static_cast<std::size_t>(in.b);
        break;
      }
      case Op::Jump:
        pc = static_cast<std::size_t>(in.b);
        break;
      case Op::IterCheck: {
        std::int32_t& count = iters[static_cast<std::size_t>(in.a)];
        if (count >= limits.max_loop_iterations) {
          pc = static_cast<std::size_t>(in.b);  // cap reached: leave the loop
        } else {
          ++count;
          ++pc;
        }
        break;
      }
    }
  }
  return Termination::Normal;
}

namespace {

void finish_percentages(CoverageReport& r) {
  r.statement_pct =
      r.statement_count == 0
          ? 100.0
          : 100.0 * r.covered_statements() / r.statement_count;
  r.branch_pct = r.branch_count == 0
                     ? 100.0
                     : 100.0 * r.covered_outcome_count() / (2.0 * r.branch_count);
}

}  // namespace

TraceResult CompiledProgram::run(const TestCase& input,
                                 const ExecLimits& limits) const {
  CoverageReport acc = empty_report();
  TraceResult t;
  t.termination = run_into(input, limits, acc);
  t.executed = std::move(acc.executed);
  t.outcome_covered = std::move(acc.outcome_covered);
  t.min_distance = std::move(acc.min_distance);
  return t;
}

TraceResult execute(const Program& p, const TestCase& input,
                    const ExecLimits& limits) {
  return CompiledProgram(p).run(input, limits);
}

CoverageReport run_suite(const CompiledProgram& cp,
                         std::span<const TestCase> suite,
                         const ExecLimits& limits) {
  if (suite.empty()) throw std::invalid_argument("empty test suite");
  CoverageReport acc = cp.empty_report();
  for (const TestCase& tc : suite) cp.run_into(tc, limits, acc);
  finish_percentages(acc);
  return acc;
}

CoverageReport run_suite(const Program& p, std::span<const TestCase> suite,
                         const ExecLimits& limits) {
  return run_suite(CompiledProgram(p), suite, limits);
}

std::string trace_csv(const CoverageReport& report) {
  std::string out = "branchId,outcome,minDistance\n";
  for (int b = 0; b < report.branch_count; ++b) {
    for (int o = 0; o < 2; ++o) {
      const Value d =
          report.min_distance[static_cast<std::size_t>(b) * 2 +
                              static_cast<std::size_t>(o)];
      out += std::to_string(b);
      out += o ? ",true," : ",false,";
      if (d != kDistanceUnreached) out += std::to_string(d);
      out += '\n';
    }
  }
  return out;
}

}  // namespace sbstlab
