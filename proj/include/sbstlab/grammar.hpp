#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sbstlab {

/// A BNF-style grammar over the program text format. Productions are ordered;
/// the genotype-to-program mapping picks among them by codon value.
struct GrammarSpec {
  struct Symbol {
    bool terminal = true;
    std::string text;  // terminal token text
    int rule = -1;     // nonterminal rule index
  };
  using Production = std::vector<Symbol>;
  struct Rule {
    std::string name;
    std::vector<Production> productions;
  };

  std::vector<Rule> rules;
  int start = 0;
  int input_arity = 0;

  int rule_index(std::string_view name) const;

  /// Audits the structural guarantees: every referenced rule exists and has
  /// productions, no production contains a '/' token, and no loop rule is
  /// reachable from inside a block (loops stay at the top level). Empty
  /// result means the grammar is sound.
  std::vector<std::string> check() const;
};

/// The built-in generation grammar, parameterized by the number of program
/// inputs. Output programs always start by seeding the five locals v0..v4,
/// keep loops at the top level in the monotone form
/// `loop (v < e) { ... v = v + c; }`, bound expressions at depth 4, and
/// contain no division.
GrammarSpec builtin_grammar(int input_arity);

}  // namespace sbstlab
