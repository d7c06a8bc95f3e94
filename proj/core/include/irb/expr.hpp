#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

/// Expression mini-language for parameter functions of (t, x).
///
/// Grammar (standard precedence, `^` binds tightest and is right-associative,
/// unary minus sits below `^`):
///
///     expr   := term (("+" | "-") term)*
///     term   := unary (("*" | "/") unary)*
///     unary  := "-" unary | power
///     power  := atom ("^" unary)?
///     atom   := number | "t" | "x" | "pi" | ident "(" expr ("," expr)* ")" | "(" expr ")"
namespace irb::expr {

enum class TokenKind { number, ident, variable, op, lparen, rparen, comma };

struct Token {
  TokenKind kind;
  std::string lexeme;
  std::size_t position;  // byte offset into the source
};

class LexError : public std::runtime_error {
 public:
  LexError(std::size_t offset, const std::string& what);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, std::string expected, const std::string& what);
  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

/// Raised by eval for sqrt of a negative, ln of a non-positive, division by
/// zero, a negative base raised to a non-integer power, or any non-finite
/// intermediate result.
class DomainError : public std::runtime_error {
 public:
  DomainError(std::string node, std::size_t position, const std::string& what);
  const std::string& node() const noexcept { return node_; }
  std::size_t position() const noexcept { return position_; }

 private:
  std::string node_;
  std::size_t position_;
};

enum class NodeKind { constant, var_t, var_x, neg, add, sub, mul, div, pow, call };

enum class Builtin { floor, abs, sqrt, exp, ln, sin, cos, min, max, ge, gt, le, lt, clamp };

enum class Var { t, x };

struct Node;

/// Immutable expression tree. Copies share structure; safe to evaluate from
/// many threads at once.
class Expr {
 public:
  Expr();  // the constant 0

  NodeKind kind() const;
  double value() const;        // constant nodes only
  Builtin builtin() const;     // call nodes only
  std::size_t position() const;
  std::size_t arity() const;
  Expr child(std::size_t i) const;

  /// Structural equality; source positions are ignored.
  friend bool operator==(const Expr& a, const Expr& b);

  static Expr constant(double v, std::size_t position = 0);
  static Expr variable(Var v, std::size_t position = 0);
  static Expr unary_neg(Expr operand, std::size_t position = 0);
  static Expr binary(NodeKind op, Expr lhs, Expr rhs, std::size_t position = 0);
  static Expr call(Builtin fn, std::vector<Expr> args, std::size_t position = 0);

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
  friend struct Node;
};

std::vector<Token> tokenize(std::string_view src);
Expr parse(std::string_view src);
double eval(const Expr& e, double t, double x);

/// Minimal-parenthesis rendering; parse(to_string(e)) == e.
std::string to_string(const Expr& e);

std::string_view builtin_name(Builtin fn);
std::optional<Builtin> builtin_from_name(std::string_view name);
std::size_t builtin_arity(Builtin fn);

bool depends_on(const Expr& e, Var v);

/// Value of a variable-free expression, or nullopt if it depends on t or x
/// or fails to evaluate.
std::optional<double> fold_constant(const Expr& e);

/// Polynomial degree in `v` after constant folding; nullopt when the
/// expression is not a polynomial in `v` (calls with a v-dependent argument,
/// division by a v-dependent term, non-integer powers of v).
std::optional<int> degree(const Expr& e, Var v);

/// `c * e`, as produced by endpoint doubling.
Expr scaled(double c, const Expr& e);

/// `e` with every occurrence of `v` replaced by the constant `value`.
Expr bind(const Expr& e, Var v, double value);

}  // namespace irb::expr
