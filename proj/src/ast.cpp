#include "sbstlab/ast.hpp"

#include <charconv>
#include <unordered_set>
#include <utility>

namespace sbstlab {

const char* to_string(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
  }
  return "?";
}

const char* to_string(Rel rel) {
  switch (rel) {
    case Rel::Lt: return "<";
    case Rel::Le: return "<=";
    case Rel::Gt: return ">";
    case Rel::Ge: return ">=";
    case Rel::Eq: return "==";
    case Rel::Ne: return "!=";
  }
  return "?";
}

Expr Expr::constant(Value v) {
  Expr e;
  e.kind = Kind::Const;
  e.literal = v;
  return e;
}

Expr Expr::variable(std::string name) {
  Expr e;
  e.kind = Kind::Var;
  e.var = std::move(name);
  return e;
}

Expr Expr::bin(BinOp op, Expr left, Expr right) {
  Expr e;
  e.kind = Kind::Bin;
  e.op = op;
  e.kids.reserve(2);
  e.kids.push_back(std::move(left));
  e.kids.push_back(std::move(right));
  return e;
}

Stmt Stmt::assign(std::string target, Expr value) {
  Stmt s;
  s.kind = Kind::Assign;
  s.target = std::move(target);
  s.value = std::move(value);
  return s;
}

Stmt Stmt::if_then(Cond c, std::vector<Stmt> then_block) {
  Stmt s;
  s.kind = Kind::If;
  s.cond = std::move(c);
  s.body = std::move(then_block);
  return s;
}

Stmt Stmt::if_else(Cond c, std::vector<Stmt> then_block,
                   std::vector<Stmt> else_block) {
  Stmt s = if_then(std::move(c), std::move(then_block));
  s.else_body = std::move(else_block);
  s.has_else = true;
  return s;
}

Stmt Stmt::loop(Cond c, std::vector<Stmt> body) {
  Stmt s;
  s.kind = Kind::Loop;
  s.cond = std::move(c);
  s.body = std::move(body);
  return s;
}

namespace {

void count_stmt(const Stmt& s, Metrics& m) {
  switch (s.kind) {
    case Stmt::Kind::Assign:
      ++m.statements;
      break;
    case Stmt::Kind::If:
      ++m.branches;
      for (const Stmt& t : s.body) count_stmt(t, m);
      for (const Stmt& t : s.else_body) count_stmt(t, m);
      break;
    case Stmt::Kind::Loop:
      ++m.branches;
      ++m.loops;
      for (const Stmt& t : s.body) count_stmt(t, m);
      break;
  }
}

struct IdCounters {
  int stmt = 0;
  int branch = 0;
};

void number_stmt(Stmt& s, IdCounters& c) {
  s.stmt_id = c.stmt++;
  switch (s.kind) {
    case Stmt::Kind::Assign:
      break;
    case Stmt::Kind::If:
      s.cond.branch_id = c.branch++;
      for (Stmt& t : s.body) number_stmt(t, c);
      for (Stmt& t : s.else_body) number_stmt(t, c);
      break;
    case Stmt::Kind::Loop:
      s.cond.branch_id = c.branch++;
      for (Stmt& t : s.body) number_stmt(t, c);
      break;
  }
}

struct ValidateState {
  int arity = 0;
  std::unordered_set<std::string> assigned;
  std::unordered_set<int> stmt_ids;
  std::unordered_set<int> branch_ids;
  std::vector<Violation>* out = nullptr;

  bool declared(const std::string& name) const {
    return is_input_name(name, arity) || assigned.count(name) > 0;
  }
};

void check_expr(const Expr& e, int stmt_id, ValidateState& st) {
  switch (e.kind) {
    case Expr::Kind::Const:
      break;
    case Expr::Kind::Var:
      if (!st.declared(e.var)) {
        st.out->push_back({Violation::Kind::UndeclaredVariable, stmt_id,
                           "undeclared variable '" + e.var + "'"});
      }
      break;
    case Expr::Kind::Bin:
      check_expr(e.left(), stmt_id, st);
      check_expr(e.right(), stmt_id, st);
      break;
  }
}

void check_stmt(const Stmt& s, bool inside_loop, ValidateState& st) {
  if (!st.stmt_ids.insert(s.stmt_id).second) {
    st.out->push_back({Violation::Kind::DuplicateId, s.stmt_id,
                       "duplicate stmtId=" + std::to_string(s.stmt_id)});
  }
  switch (s.kind) {
    case Stmt::Kind::Assign:
      check_expr(s.value, s.stmt_id, st);
      st.assigned.insert(s.target);
      break;
    case Stmt::Kind::If:
      if (!st.branch_ids.insert(s.cond.branch_id).second) {
        st.out->push_back(
            {Violation::Kind::DuplicateId, s.stmt_id,
             "duplicate branchId=" + std::to_string(s.cond.branch_id)});
      }
      check_expr(s.cond.lhs, s.stmt_id, st);
      check_expr(s.cond.rhs, s.stmt_id, st);
      for (const Stmt& t : s.body) check_stmt(t, inside_loop, st);
      for (const Stmt& t : s.else_body) check_stmt(t, inside_loop, st);
      break;
    case Stmt::Kind::Loop:
      if (inside_loop) {
        st.out->push_back({Violation::Kind::NestedLoop, s.stmt_id,
                           "nested loop at stmtId=" + std::to_string(s.stmt_id)});
      }
      if (!st.branch_ids.insert(s.cond.branch_id).second) {
        st.out->push_back(
            {Violation::Kind::DuplicateId, s.stmt_id,
             "duplicate branchId=" + std::to_string(s.cond.branch_id)});
      }
      check_expr(s.cond.lhs, s.stmt_id, st);
      check_expr(s.cond.rhs, s.stmt_id, st);
      for (const Stmt& t : s.body) check_stmt(t, true, st);
      break;
  }
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Const: return a.literal == b.literal;
    case Expr::Kind::Var: return a.var == b.var;
    case Expr::Kind::Bin:
      return a.op == b.op && expr_equal(a.left(), b.left()) &&
             expr_equal(a.right(), b.right());
  }
  return false;
}

bool cond_equal(const Cond& a, const Cond& b) {
  return a.rel == b.rel && expr_equal(a.lhs, b.lhs) && expr_equal(a.rhs, b.rhs);
}

bool block_equal(const std::vector<Stmt>& a, const std::vector<Stmt>& b);

bool stmt_equal(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Stmt::Kind::Assign:
      return a.target == b.target && expr_equal(a.value, b.value);
    case Stmt::Kind::If:
      return a.has_else == b.has_else && cond_equal(a.cond, b.cond) &&
             block_equal(a.body, b.body) && block_equal(a.else_body, b.else_body);
    case Stmt::Kind::Loop:
      return cond_equal(a.cond, b.cond) && block_equal(a.body, b.body);
  }
  return false;
}

bool block_equal(const std::vector<Stmt>& a, const std::vector<Stmt>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!stmt_equal(a[i], b[i])) return false;
  }
  return true;
}

}  // namespace

Metrics compute_metrics(const Program& p) {
  Metrics m;
  for (const Stmt& s : p.body) count_stmt(s, m);
  return m;
}

void assign_ids(Program& p) {
  IdCounters c;
  for (Stmt& s : p.body) number_stmt(s, c);
}

std::vector<Violation> validate(const Program& p) {
  std::vector<Violation> out;
  ValidateState st;
  st.arity = p.input_arity;
  st.out = &out;
  for (const Stmt& s : p.body) check_stmt(s, false, st);
  return out;
}

bool structurally_equal(const Program& a, const Program& b) {
  return a.input_arity == b.input_arity && block_equal(a.body, b.body);
}

std::string input_name(int index) { return "x" + std::to_string(index); }

bool is_input_name(std::string_view name, int arity) {
  if (name.size() < 2 || name[0] != 'x') return false;
  int idx = 0;
  auto [ptr, ec] =
      std::from_chars(name.data() + 1, name.data() + name.size(), idx);
  if (ec != std::errc() || ptr != name.data() + name.size()) return false;
  // no leading zeros except "x0" itself
  if (name.size() > 2 && name[1] == '0') return false;
  return idx >= 0 && idx < arity;
}

}  // namespace sbstlab
