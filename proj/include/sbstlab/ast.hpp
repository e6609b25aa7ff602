#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sbstlab {

/// All program values are 64-bit signed integers.
using Value = std::int64_t;

enum class BinOp { Add, Sub, Mul };

/// Relational operators of conditions. There is deliberately no division
/// anywhere in the language.
enum class Rel { Lt, Le, Gt, Ge, Eq, Ne };

const char* to_string(BinOp op);
const char* to_string(Rel rel);

/// Expression tree with value semantics. Bin nodes hold exactly two kids.
struct Expr {
  enum class Kind { Const, Var, Bin };

  Kind kind = Kind::Const;
  Value literal = 0;       // Const
  std::string var;         // Var
  BinOp op = BinOp::Add;   // Bin
  std::vector<Expr> kids;  // Bin: {left, right}

  static Expr constant(Value v);
  static Expr variable(std::string name);
  static Expr bin(BinOp op, Expr left, Expr right);

  const Expr& left() const { return kids[0]; }
  const Expr& right() const { return kids[1]; }
};

/// A condition `lhs rel rhs`. branch_id is dense pre-order, set by
/// assign_ids(); the two outcomes (false, true) are the coverage targets.
struct Cond {
  Expr lhs;
  Rel rel = Rel::Lt;
  Expr rhs;
  int branch_id = -1;
};

/// Statement node. Assign carries target/value; If carries cond/body
/// (+ optional else_body); Loop carries cond/body. stmt_id is dense
/// pre-order over all statement nodes.
struct Stmt {
  enum class Kind { Assign, If, Loop };

  Kind kind = Kind::Assign;
  int stmt_id = -1;

  std::string target;  // Assign
  Expr value;          // Assign

  Cond cond;                    // If / Loop
  std::vector<Stmt> body;       // If: then-block; Loop: body
  std::vector<Stmt> else_body;  // If only
  bool has_else = false;

  static Stmt assign(std::string target, Expr value);
  static Stmt if_then(Cond c, std::vector<Stmt> then_block);
  static Stmt if_else(Cond c, std::vector<Stmt> then_block,
                      std::vector<Stmt> else_block);
  static Stmt loop(Cond c, std::vector<Stmt> body);
};

/// Structural size measures. statements counts Assign nodes only; branches
/// counts conditions (if and loop headers); loops counts Loop nodes.
struct Metrics {
  int statements = 0;
  int branches = 0;
  int loops = 0;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

struct Program {
  std::string name = "sut";
  int input_arity = 0;
  std::vector<Stmt> body;
};

Metrics compute_metrics(const Program& p);

/// Renumbers stmt_id (all statements) and branch_id (all conditions) in
/// pre-order, starting at 0. Call after any structural edit.
void assign_ids(Program& p);

struct Violation {
  enum class Kind { NestedLoop, UndeclaredVariable, DuplicateId };
  Kind kind;
  int stmt_id = -1;
  std::string detail;
};

/// Checks the validity rules: no loop nested inside another loop, every
/// variable read is an input or a previously assigned local (textual
/// pre-order), and statement/branch ids are unique. Empty result = valid.
std::vector<Violation> validate(const Program& p);

/// Structural equality ignoring the program name and ids.
bool structurally_equal(const Program& a, const Program& b);

/// Input parameters are named x0..x{k-1}.
std::string input_name(int index);
bool is_input_name(std::string_view name, int arity);

}  // namespace sbstlab
