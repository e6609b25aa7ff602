#include "sbstlab/grammar.hpp"

#include <map>
#include <set>
#include <stdexcept>

#include "sbstlab/ast.hpp"

namespace sbstlab {

int GrammarSpec::rule_index(std::string_view name) const {
  for (std::size_t i = 0; i < rules.size(); ++i)
    if (rules[i].name == name) return static_cast<int>(i);
  return -1;
}

std::vector<std::string> GrammarSpec::check() const {
  std::vector<std::string> problems;
  if (rules.empty()) {
    problems.push_back("grammar has no rules");
    return problems;
  }
  if (start < 0 || start >= static_cast<int>(rules.size()))
    problems.push_back("start rule out of range");

  for (const Rule& r : rules) {
    if (r.productions.empty())
      problems.push_back("rule '" + r.name + "' has no productions");
    for (const Production& p : r.productions) {
      for (const Symbol& s : p) {
        if (s.terminal) {
          if (s.text.find('/') != std::string::npos)
            problems.push_back("division token in rule '" + r.name + "'");
        } else if (s.rule < 0 || s.rule >= static_cast<int>(rules.size())) {
          problems.push_back("rule '" + r.name + "' references undefined rule");
        }
      }
    }
  }

  // Loops must not be derivable from block-level rules.
  const int block = rule_index("block_list");
  const int loop = rule_index("loop_stmt");
  if (block >= 0 && loop >= 0) {
    std::set<int> reachable;
    std::vector<int> work{block};
    while (!work.empty()) {
      const int r = work.back();
      work.pop_back();
      if (!reachable.insert(r).second) continue;
      for (const Production& p : rules[static_cast<std::size_t>(r)].productions)
        for (const Symbol& s : p)
          if (!s.terminal) work.push_back(s.rule);
    }
    if (reachable.count(loop))
      problems.push_back("loop_stmt reachable from block_list");
    for (int r : reachable) {
      if (rules[static_cast<std::size_t>(r)].name.rfind("loop", 0) == 0)
        problems.push_back("block can derive '" +
                           rules[static_cast<std::size_t>(r)].name + "'");
    }
  }
  return problems;
}

namespace {

constexpr int kLocalCount = 5;

class Builder {
 public:
  int rule(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    const int id = static_cast<int>(g_.rules.size());
    g_.rules.push_back({name, {}});
    index_[name] = id;
    return id;
  }

  void prod(const std::string& name, GrammarSpec::Production p) {
    g_.rules[static_cast<std::size_t>(rule(name))].productions.push_back(
        std::move(p));
  }

  GrammarSpec::Symbol t(std::string text) {
    return {true, std::move(text), -1};
  }
  GrammarSpec::Symbol n(const std::string& name) {
    return {false, "", rule(name)};
  }

  GrammarSpec take() { return std::move(g_); }

 private:
  GrammarSpec g_;
  std::map<std::string, int> index_;
};

std::string local_name(int i) { return "v" + std::to_string(i); }

}  // namespace

GrammarSpec builtin_grammar(int input_arity) {
  if (input_arity < 1)
    throw std::invalid_argument("builtin grammar needs input arity >= 1");

  Builder b;

  // Rule 0 is the start symbol.
  b.prod("prog", {b.n("init"), b.n("stmt_list")});

  // Seed every local so all later references are declared.
  {
    GrammarSpec::Production init;
    for (int i = 0; i < kLocalCount; ++i) {
      init.push_back(b.t(local_name(i)));
      init.push_back(b.t("="));
      init.push_back(b.n("init_rhs"));
      init.push_back(b.t(";"));
    }
    b.prod("init", std::move(init));
  }
  b.prod("init_rhs", {b.n("input_var")});
  b.prod("init_rhs", {b.n("const")});
  b.prod("init_rhs", {b.n("input_var")});

  // The top-level list is built from segments of 1, 4 or 16 statements, so
  // a single codon flip can change the program size by a large step. That
  // keeps every size target reachable within a small generation budget.
  b.prod("stmt_list", {b.n("seg")});
  b.prod("stmt_list", {b.n("seg"), b.n("stmt_list")});
  b.prod("stmt_list", {b.n("seg"), b.n("stmt_list")});

  b.prod("seg", {b.n("stmt")});
  b.prod("seg", {b.n("stmt")});
  b.prod("seg", {b.n("seg4")});
  b.prod("seg", {b.n("seg16")});
  b.prod("seg", {b.n("seg64")});
  b.prod("seg4", {b.n("stmt"), b.n("stmt"), b.n("stmt"), b.n("stmt")});
  b.prod("seg16", {b.n("seg4"), b.n("seg4"), b.n("seg4"), b.n("seg4")});
  b.prod("seg64", {b.n("seg16"), b.n("seg16"), b.n("seg16"), b.n("seg16")});

  b.prod("stmt", {b.n("assign")});
  b.prod("stmt", {b.n("if_stmt")});
  b.prod("stmt", {b.n("if_else_stmt")});
  b.prod("stmt", {b.n("assign")});
  b.prod("stmt", {b.n("loop_stmt")});
  b.prod("stmt", {b.n("assign")});

  // Block statements: no loops below the top level. Nesting is kept
  // subcritical (expected child lists per list well below 1) so random
  // derivations terminate instead of exhausting the wrap budget.
  b.prod("block_list", {b.n("blk_stmt")});
  b.prod("block_list", {b.n("blk_stmt"), b.n("block_list")});

  b.prod("blk_stmt", {b.n("assign")});
  b.prod("blk_stmt", {b.n("assign")});
  b.prod("blk_stmt", {b.n("assign")});
  b.prod("blk_stmt", {b.n("blk_if")});
  b.prod("blk_stmt", {b.n("assign")});
  b.prod("blk_stmt", {b.n("assign")});
  b.prod("blk_stmt", {b.n("assign")});
  b.prod("blk_stmt", {b.n("blk_if_else")});

  const auto if_header = [&b](GrammarSpec::Production& p) {
    p.push_back(b.t("if"));
    p.push_back(b.t("("));
    p.push_back(b.n("cond"));
    p.push_back(b.t(")"));
    p.push_back(b.t("{"));
    p.push_back(b.n("block_list"));
    p.push_back(b.t("}"));
  };
  {
    GrammarSpec::Production p;
    if_header(p);
    b.prod("if_stmt", std::move(p));
  }
  {
    GrammarSpec::Production p;
    if_header(p);
    p.push_back(b.t("else"));
    p.push_back(b.t("{"));
    p.push_back(b.n("block_list"));
    p.push_back(b.t("}"));
    b.prod("if_else_stmt", std::move(p));
  }
  {
    GrammarSpec::Production p;
    if_header(p);
    b.prod("blk_if", std::move(p));
  }
  {
    GrammarSpec::Production p;
    if_header(p);
    p.push_back(b.t("else"));
    p.push_back(b.t("{"));
    p.push_back(b.n("block_list"));
    p.push_back(b.t("}"));
    b.prod("blk_if_else", std::move(p));
  }

  // Monotone loop form: header `v < e`, body ends by stepping v upward.
  for (int i = 0; i < kLocalCount; ++i) {
    const std::string v = local_name(i);
    b.prod("loop_stmt",
           {b.t("loop"), b.t("("), b.t(v), b.t("<"), b.n("expr1"), b.t(")"),
            b.t("{"), b.n("block_list"), b.t(v), b.t("="), b.t(v), b.t("+"),
            b.n("pos_const"), b.t(";"), b.t("}")});
  }

  b.prod("assign", {b.n("target"), b.t("="), b.n("expr1"), b.t(";")});
  for (int i = 0; i < kLocalCount; ++i) b.prod("target", {b.t(local_name(i))});

  // The compared side always carries a variable, so conditions are almost
  // never decided at generation time (constant-vs-constant comparisons are
  // dead code for every input).
  b.prod("cond", {b.n("vexpr"), b.n("rel"), b.n("expr1")});
  b.prod("vexpr", {b.n("var")});
  b.prod("vexpr", {b.t("("), b.n("var"), b.n("op"), b.n("expr2"), b.t(")")});
  for (const char* rel : {"<", "<=", ">", ">=", "==", "!="})
    b.prod("rel", {b.t(rel)});

  // Expressions, depth-bounded at 4 by layering.
  for (int d = 1; d <= 3; ++d) {
    const std::string cur = "expr" + std::to_string(d);
    const std::string sub = "expr" + std::to_string(d + 1);
    b.prod(cur, {b.n("leaf")});
    b.prod(cur,
           {b.t("("), b.n(sub), b.n("op"), b.n(sub), b.t(")")});
  }
  b.prod("expr4", {b.n("leaf")});

  b.prod("leaf", {b.n("const")});
  b.prod("leaf", {b.n("var")});

  for (int i = 0; i < input_arity; ++i) b.prod("var", {b.t(input_name(i))});
  for (int i = 0; i < kLocalCount; ++i) b.prod("var", {b.t(local_name(i))});

  for (const char* c : {"0", "1", "2", "3", "4", "5", "6", "7", "8", "9", "10",
                        "25", "100", "250", "1000", "10000"})
    b.prod("const", {b.t(c)});
  for (const char* c : {"1", "2", "3", "5"}) b.prod("pos_const", {b.t(c)});

  // Multiplication kept rare: product chains overflow quickly on the
  // +/-1e6 input domain, and an overflow halts the whole run.
  for (const char* op : {"+", "-", "+", "-", "+", "-", "+", "-", "*"})
    b.prod("op", {b.t(op)});

  for (int i = 0; i < input_arity; ++i)
    b.prod("input_var", {b.t(input_name(i))});

  GrammarSpec g = b.take();
  g.start = g.rule_index("prog");
  g.input_arity = input_arity;
  return g;
}

}  // namespace sbstlab
