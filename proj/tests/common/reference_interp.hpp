#pragma once

// Test-only reference semantics: a plain recursive AST walker, written
// independently of the compiled interpreter so the two can cross-check each
// other. It tracks executed assignments and covered branch outcomes only
// (no distances), using map-based environments and 128-bit range checks
// instead of slot tables and overflow builtins.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "sbstlab/ast.hpp"
#include "sbstlab/interp.hpp"

namespace refinterp {

struct RefTrace {
  std::set<int> executed;
  std::set<std::pair<int, bool>> outcomes;
  bool overflow = false;
  bool step_limit = false;
};

class RefInterp {
 public:
  RefInterp(const sbstlab::Program& program, sbstlab::ExecLimits limits)
      : program_(program), limits_(limits) {}

  RefTrace run(const sbstlab::TestCase& input) {
    env_.clear();
    for (int i = 0; i < program_.input_arity; ++i)
      env_[sbstlab::input_name(i)] = input.at(static_cast<std::size_t>(i));
    trace_ = RefTrace{};
    steps_ = 0;
    halted_ = false;
    run_block(program_.body);
    return std::move(trace_);
  }

 private:
  using Value = sbstlab::Value;
  using Wide = __int128;

  static constexpr Wide kMin = std::numeric_limits<Value>::min();
  static constexpr Wide kMax = std::numeric_limits<Value>::max();

  Wide eval(const sbstlab::Expr& e) {
    using K = sbstlab::Expr::Kind;
    switch (e.kind) {
      case K::Const:
        return e.literal;
      case K::Var: {
        auto it = env_.find(e.var);
        return it == env_.end() ? 0 : it->second;
      }
      case K::Bin: {
        const Wide l = eval(e.left());
        if (halted_) return 0;
        const Wide r = eval(e.right());
        if (halted_) return 0;
        Wide v = 0;
        switch (e.op) {
          case sbstlab::BinOp::Add: v = l + r; break;
          case sbstlab::BinOp::Sub: v = l - r; break;
          case sbstlab::BinOp::Mul: v = l * r; break;
        }
        if (v < kMin || v > kMax) {
          halted_ = true;
          trace_.overflow = true;
          return 0;
        }
        return v;
      }
    }
    return 0;
  }

  bool step() {
    if (++steps_ > limits_.max_total_steps) {
      halted_ = true;
      trace_.step_limit = true;
      return false;
    }
    return true;
  }

  // Returns the condition outcome; meaningless when halted_.
  bool eval_cond(const sbstlab::Cond& c) {
    if (!step()) return false;
    const Wide l = eval(c.lhs);
    if (halted_) return false;
    const Wide r = eval(c.rhs);
    if (halted_) return false;
    bool taken = false;
    switch (c.rel) {
      case sbstlab::Rel::Lt: taken = l < r; break;
      case sbstlab::Rel::Le: taken = l <= r; break;
      case sbstlab::Rel::Gt: taken = l > r; break;
      case sbstlab::Rel::Ge: taken = l >= r; break;
      case sbstlab::Rel::Eq: taken = l == r; break;
      case sbstlab::Rel::Ne: taken = l != r; break;
    }
    trace_.outcomes.insert({c.branch_id, taken});
    return taken;
  }

  void run_block(const std::vector<sbstlab::Stmt>& block) {
    for (const sbstlab::Stmt& s : block) {
      if (halted_) return;
      run_stmt(s);
    }
  }

  void run_stmt(const sbstlab::Stmt& s) {
    using K = sbstlab::Stmt::Kind;
    switch (s.kind) {
      case K::Assign: {
        if (!step()) return;
        trace_.executed.insert(s.stmt_id);
        const Wide v = eval(s.value);
        if (halted_) return;
        env_[s.target] = static_cast<Value>(v);
        break;
      }
      case K::If: {
        const bool taken = eval_cond(s.cond);
        if (halted_) return;
        if (taken)
          run_block(s.body);
        else if (s.has_else)
          run_block(s.else_body);
        break;
      }
      case K::Loop: {
        int iterations = 0;
        while (iterations < limits_.max_loop_iterations) {
          const bool taken = eval_cond(s.cond);
          if (halted_ || !taken) return;
          run_block(s.body);
          if (halted_) return;
          ++iterations;
        }
        break;
      }
    }
  }

  const sbstlab::Program& program_;
  sbstlab::ExecLimits limits_;
  std::map<std::string, Value> env_;
  RefTrace trace_;
  std::int64_t steps_ = 0;
  bool halted_ = false;
};

}  // namespace refinterp
