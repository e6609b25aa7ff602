#include "sbstlab/text.hpp"

#include <cctype>
#include <charconv>
#include <sstream>
#include <utility>

namespace sbstlab {

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                         std::to_string(column) + ": " + message),
      line(line),
      column(column) {}

namespace {

std::string describe(const std::vector<Violation>& vs) {
  std::ostringstream os;
  os << "invalid program:";
  for (const Violation& v : vs) os << " " << v.detail << ";";
  return os.str();
}

}  // namespace

InvalidProgram::InvalidProgram(std::vector<Violation> v)
    : std::runtime_error(describe(v)), violations(std::move(v)) {}

namespace {

// ---- rendering ----

void render_expr(const Expr& e, std::string& out) {
  switch (e.kind) {
    case Expr::Kind::Const:
      out += std::to_string(e.literal);
      break;
    case Expr::Kind::Var:
      out += e.var;
      break;
    case Expr::Kind::Bin:
      out += '(';
      render_expr(e.left(), out);
      out += ' ';
      out += to_string(e.op);
      out += ' ';
      render_expr(e.right(), out);
      out += ')';
      break;
  }
}

void render_cond(const Cond& c, std::string& out) {
  render_expr(c.lhs, out);
  out += ' ';
  out += to_string(c.rel);
  out += ' ';
  render_expr(c.rhs, out);
}

void indent(int depth, std::string& out) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
}

void render_block(const std::vector<Stmt>& block, int depth, std::string& out);

void render_stmt(const Stmt& s, int depth, std::string& out) {
  indent(depth, out);
  switch (s.kind) {
    case Stmt::Kind::Assign:
      out += s.target;
      out += " = ";
      render_expr(s.value, out);
      out += ";\n";
      break;
    case Stmt::Kind::If:
      out += "if (";
      render_cond(s.cond, out);
      out += ") {\n";
      render_block(s.body, depth + 1, out);
      indent(depth, out);
      if (s.has_else) {
        out += "} else {\n";
        render_block(s.else_body, depth + 1, out);
        indent(depth, out);
      }
      out += "}\n";
      break;
    case Stmt::Kind::Loop:
      out += "loop (";
      render_cond(s.cond, out);
      out += ") {\n";
      render_block(s.body, depth + 1, out);
      indent(depth, out);
      out += "}\n";
      break;
  }
}

void render_block(const std::vector<Stmt>& block, int depth, std::string& out) {
  for (const Stmt& s : block) render_stmt(s, depth, out);
}

// ---- lexing ----

struct Token {
  enum class Kind { Ident, Int, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  Value number = 0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  const Token& peek() {
    if (!has_) {
      current_ = lex();
      has_ = true;
    }
    return current_;
  }

  Token take() {
    const Token t = peek();
    has_ = false;
    return t;
  }

  /// Reads a raw program name: everything up to (excluding) '('.
  std::string read_name() {
    skip_space();
    const int l = line_, c = col_;
    std::string name;
    while (pos_ < src_.size() && src_[pos_] != '(') {
      name += src_[pos_];
      advance();
    }
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back())))
      name.pop_back();
    if (name.empty()) throw ParseError(l, c, "missing program name");
    for (char ch : name) {
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' ||
            ch == '-'))
        throw ParseError(l, c, std::string("bad character in program name: '") +
                                   ch + "'");
    }
    return name;
  }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(t.line, t.column, msg);
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char ch = src_[pos_];
      if (ch == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        advance();
      } else {
        break;
      }
    }
  }

  Token lex() {
    skip_space();
    Token t;
    t.line = line_;
    t.column = col_;
    if (pos_ >= src_.size()) return t;
    const char ch = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      t.kind = Token::Kind::Ident;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_')) {
        t.text += src_[pos_];
        advance();
      }
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      t.kind = Token::Kind::Int;
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        t.text += src_[pos_];
        advance();
      }
      const auto* begin = t.text.data();
      const auto* end = begin + t.text.size();
      auto [p, ec] = std::from_chars(begin, end, t.number);
      if (ec != std::errc() || p != end)
        throw ParseError(t.line, t.column, "integer literal out of range");
      return t;
    }
    t.kind = Token::Kind::Punct;
    switch (ch) {
      case '=':
      case '!':
      case '<':
      case '>': {
        t.text += ch;
        advance();
        if (pos_ < src_.size() && src_[pos_] == '=') {
          t.text += '=';
          advance();
        }
        if (t.text == "!")
          throw ParseError(t.line, t.column, "expected '!=' after '!'");
        return t;
      }
      case '+':
      case '-':
      case '*':
      case '(':
      case ')':
      case '{':
      case '}':
      case ';':
      case ',':
        t.text += ch;
        advance();
        return t;
      default:
        throw ParseError(t.line, t.column,
                         std::string("unexpected character '") + ch + "'");
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token current_;
  bool has_ = false;
};

// ---- parsing ----

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) {}

  Program parse_program() {
    expect_ident("program");
    Program p;
    p.name = lex_.read_name();
    expect_punct("(");
    if (!peek_is_punct(")")) {
      for (;;) {
        const Token t = expect(Token::Kind::Ident, "input parameter");
        const std::string want = input_name(p.input_arity);
        if (t.text != want)
          lex_.fail(t, "expected parameter '" + want + "', got '" + t.text + "'");
        ++p.input_arity;
        if (peek_is_punct(",")) {
          lex_.take();
          continue;
        }
        break;
      }
    }
    expect_punct(")");
    p.body = parse_block();
    const Token t = lex_.take();
    if (t.kind != Token::Kind::End) lex_.fail(t, "trailing input after program");
    return p;
  }

 private:
  std::vector<Stmt> parse_block() {
    expect_punct("{");
    std::vector<Stmt> block;
    while (!peek_is_punct("}")) block.push_back(parse_stmt());
    expect_punct("}");
    return block;
  }

  Stmt parse_stmt() {
    const Token t = lex_.peek();
    if (t.kind != Token::Kind::Ident) lex_.fail(t, "expected a statement");
    if (t.text == "if") {
      lex_.take();
      expect_punct("(");
      Cond c = parse_cond();
      expect_punct(")");
      std::vector<Stmt> then_block = parse_block();
      if (peek_is_ident("else")) {
        lex_.take();
        std::vector<Stmt> else_block = parse_block();
        return Stmt::if_else(std::move(c), std::move(then_block),
                             std::move(else_block));
      }
      return Stmt::if_then(std::move(c), std::move(then_block));
    }
    if (t.text == "loop") {
      lex_.take();
      expect_punct("(");
      Cond c = parse_cond();
      expect_punct(")");
      return Stmt::loop(std::move(c), parse_block());
    }
    // assignment
    const Token target = lex_.take();
    expect_punct("=");
    Expr value = parse_expr();
    expect_punct(";");
    return Stmt::assign(target.text, std::move(value));
  }

  Cond parse_cond() {
    Cond c;
    c.lhs = parse_expr();
    const Token t = expect(Token::Kind::Punct, "relational operator");
    if (t.text == "<")
      c.rel = Rel::Lt;
    else if (t.text == "<=")
      c.rel = Rel::Le;
    else if (t.text == ">")
      c.rel = Rel::Gt;
    else if (t.text == ">=")
      c.rel = Rel::Ge;
    else if (t.text == "==")
      c.rel = Rel::Eq;
    else if (t.text == "!=")
      c.rel = Rel::Ne;
    else
      lex_.fail(t, "expected relational operator, got '" + t.text + "'");
    c.rhs = parse_expr();
    return c;
  }

  // expr := term (('+'|'-') term)* ; term := factor ('*' factor)*
  Expr parse_expr() {
    Expr e = parse_term();
    while (peek_is_punct("+") || peek_is_punct("-")) {
      const BinOp op =
          lex_.take().text == "+" ? BinOp::Add : BinOp::Sub;
      e = Expr::bin(op, std::move(e), parse_term());
    }
    return e;
  }

  Expr parse_term() {
    Expr e = parse_factor();
    while (peek_is_punct("*")) {
      lex_.take();
      e = Expr::bin(BinOp::Mul, std::move(e), parse_factor());
    }
    return e;
  }

  Expr parse_factor() {
    const Token t = lex_.take();
    switch (t.kind) {
      case Token::Kind::Int:
        return Expr::constant(t.number);
      case Token::Kind::Ident:
        return Expr::variable(t.text);
      case Token::Kind::Punct:
        if (t.text == "(") {
          Expr e = parse_expr();
          expect_punct(")");
          return e;
        }
        if (t.text == "-") {
          const Token n = expect(Token::Kind::Int, "integer literal");
          // parse as negative to cover INT64_MIN
          const std::string digits = "-" + n.text;
          Value v = 0;
          auto [p, ec] =
              std::from_chars(digits.data(), digits.data() + digits.size(), v);
          if (ec != std::errc() || p != digits.data() + digits.size())
            lex_.fail(n, "integer literal out of range");
          return Expr::constant(v);
        }
        [[fallthrough]];
      default:
        lex_.fail(t, "expected an expression, got '" + t.text + "'");
    }
  }

  Token expect(Token::Kind kind, const std::string& what) {
    const Token t = lex_.take();
    if (t.kind != kind)
      lex_.fail(t, "expected " + what +
                       (t.text.empty() ? "" : ", got '" + t.text + "'"));
    return t;
  }

  void expect_punct(const std::string& text) {
    const Token t = lex_.take();
    if (t.kind != Token::Kind::Punct || t.text != text)
      lex_.fail(t, "expected '" + text + "'" +
                       (t.text.empty() ? "" : ", got '" + t.text + "'"));
  }

  void expect_ident(const std::string& text) {
    const Token t = lex_.take();
    if (t.kind != Token::Kind::Ident || t.text != text)
      lex_.fail(t, "expected '" + text + "'");
  }

  bool peek_is_punct(const std::string& text) {
    const Token& t = lex_.peek();
    return t.kind == Token::Kind::Punct && t.text == text;
  }

  bool peek_is_ident(const std::string& text) {
    const Token& t = lex_.peek();
    return t.kind == Token::Kind::Ident && t.text == text;
  }

  Lexer lex_;
};

}  // namespace

std::string render(const Program& p) {
  std::string out = "program " + p.name + "(";
  for (int i = 0; i < p.input_arity; ++i) {
    if (i > 0) out += ", ";
    out += input_name(i);
  }
  out += ")\n{\n";
  render_block(p.body, 1, out);
  out += "}\n";
  return out;
}

Program parse(std::string_view text) {
  Parser parser(text);
  Program p = parser.parse_program();
  assign_ids(p);
  if (auto violations = validate(p); !violations.empty())
    throw InvalidProgram(std::move(violations));
  return p;
}

}  // namespace sbstlab
