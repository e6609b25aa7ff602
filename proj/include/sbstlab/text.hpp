#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "sbstlab/ast.hpp"

namespace sbstlab {

/// Canonical text form:
///
///   program <name>(x0, x1)
///   {
///     v0 = (x0 + 1);
///     if (x0 >= (x1 + 10)) {
///       v1 = 3;
///     } else {
///       v1 = -3;
///     }
///     loop (v0 < 100) {
///       v0 = (v0 + 1);
///     }
///   }
///
/// Binary expressions are always parenthesized, so the output is unambiguous
/// and stable: render(parse(text)) == text for canonical input.
std::string render(const Program& p);

struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(int line, int column, const std::string& message);
};

/// Parse failure caused by a structurally well-formed but invalid program
/// (nested loops, undeclared variables).
struct InvalidProgram : std::runtime_error {
  std::vector<Violation> violations;
  explicit InvalidProgram(std::vector<Violation> v);
};

/// Parses the canonical format. `#` starts a line comment. The returned
/// program has ids assigned pre-order and passes validate(). Throws
/// ParseError on syntax errors and InvalidProgram on validation failures.
Program parse(std::string_view text);

}  // namespace sbstlab
