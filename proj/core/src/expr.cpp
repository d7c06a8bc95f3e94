#include "irb/expr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <utility>

namespace irb::expr {

struct Node {
  NodeKind kind = NodeKind::constant;
  double value = 0.0;
  Builtin fn = Builtin::abs;
  std::vector<Expr> children;
  std::size_t position = 0;

  static Expr wrap(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }
};

LexError::LexError(std::size_t offset, const std::string& what)
    : std::runtime_error(what), offset_(offset) {}

ParseError::ParseError(std::size_t offset, std::string expected, const std::string& what)
    : std::runtime_error(what), offset_(offset), expected_(std::move(expected)) {}

DomainError::DomainError(std::string node, std::size_t position, const std::string& what)
    : std::runtime_error(what), node_(std::move(node)), position_(position) {}

// ---------------------------------------------------------------------------
// Expr handle

Expr::Expr() : node_(std::make_shared<const Node>()) {}

NodeKind Expr::kind() const { return node_->kind; }
double Expr::value() const { return node_->value; }
Builtin Expr::builtin() const { return node_->fn; }
std::size_t Expr::position() const { return node_->position; }
std::size_t Expr::arity() const { return node_->children.size(); }
Expr Expr::child(std::size_t i) const { return node_->children.at(i); }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const Node& l = *a.node_;
  const Node& r = *b.node_;
  if (l.kind != r.kind || l.children.size() != r.children.size()) return false;
  if (l.kind == NodeKind::constant && !(l.value == r.value)) return false;
  if (l.kind == NodeKind::call && l.fn != r.fn) return false;
  for (std::size_t i = 0; i < l.children.size(); ++i) {
    if (!(l.children[i] == r.children[i])) return false;
  }
  return true;
}

Expr Expr::constant(double v, std::size_t position) {
  Node n;
  n.kind = NodeKind::constant;
  n.value = v;
  n.position = position;
  return Node::wrap(std::move(n));
}

Expr Expr::variable(Var v, std::size_t position) {
  Node n;
  n.kind = v == Var::t ? NodeKind::var_t : NodeKind::var_x;
  n.position = position;
  return Node::wrap(std::move(n));
}

Expr Expr::unary_neg(Expr operand, std::size_t position) {
  Node n;
  n.kind = NodeKind::neg;
  n.children.push_back(std::move(operand));
  n.position = position;
  return Node::wrap(std::move(n));
}

Expr Expr::binary(NodeKind op, Expr lhs, Expr rhs, std::size_t position) {
  if (op != NodeKind::add && op != NodeKind::sub && op != NodeKind::mul && op != NodeKind::div &&
      op != NodeKind::pow) {
    throw std::invalid_argument("Expr::binary: not a binary operator");
  }
  Node n;
  n.kind = op;
  n.children = {std::move(lhs), std::move(rhs)};
  n.position = position;
  return Node::wrap(std::move(n));
}

Expr Expr::call(Builtin fn, std::vector<Expr> args, std::size_t position) {
  if (args.size() != builtin_arity(fn)) {
    throw std::invalid_argument("Expr::call: wrong arity for " + std::string(builtin_name(fn)));
  }
  Node n;
  n.kind = NodeKind::call;
  n.fn = fn;
  n.children = std::move(args);
  n.position = position;
  return Node::wrap(std::move(n));
}

// ---------------------------------------------------------------------------
// Builtins

namespace {

struct BuiltinInfo {
  Builtin fn;
  std::string_view name;
  std::size_t arity;
};

constexpr std::array<BuiltinInfo, 14> kBuiltins{{
    {Builtin::floor, "floor", 1},
    {Builtin::abs, "abs", 1},
    {Builtin::sqrt, "sqrt", 1},
    {Builtin::exp, "exp", 1},
    {Builtin::ln, "ln", 1},
    {Builtin::sin, "sin", 1},
    {Builtin::cos, "cos", 1},
    {Builtin::min, "min", 2},
    {Builtin::max, "max", 2},
    {Builtin::ge, "ge", 2},
    {Builtin::gt, "gt", 2},
    {Builtin::le, "le", 2},
    {Builtin::lt, "lt", 2},
    {Builtin::clamp, "clamp", 3},
}};

const BuiltinInfo& info(Builtin fn) {
  for (const auto& b : kBuiltins) {
    if (b.fn == fn) return b;
  }
  throw std::logic_error("unknown builtin");
}

}  // namespace

std::string_view builtin_name(Builtin fn) { return info(fn).name; }
std::size_t builtin_arity(Builtin fn) { return info(fn).arity; }

std::optional<Builtin> builtin_from_name(std::string_view name) {
  for (const auto& b : kBuiltins) {
    if (b.name == name) return b.fn;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

constexpr std::string_view kUnicodeMinus = "\xE2\x88\x92";

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (is_digit(c) || (c == '.' && i + 1 < src.size() && is_digit(src[i + 1]))) {
      while (i < src.size() && is_digit(src[i])) ++i;
      if (i < src.size() && src[i] == '.') {
        ++i;
        while (i < src.size() && is_digit(src[i])) ++i;
      }
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && is_digit(src[j])) {
          i = j;
          while (i < src.size() && is_digit(src[i])) ++i;
        } else {
          throw LexError(j, "malformed exponent at offset " + std::to_string(j));
        }
      }
      out.push_back({TokenKind::number, std::string(src.substr(start, i - start)), start});
    } else if (is_ident_start(c)) {
      while (i < src.size() && is_ident_char(src[i])) ++i;
      std::string word(src.substr(start, i - start));
      const TokenKind kind = (word == "t" || word == "x") ? TokenKind::variable : TokenKind::ident;
      out.push_back({kind, std::move(word), start});
    } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
      out.push_back({TokenKind::op, std::string(1, c), start});
      ++i;
    } else if (src.substr(i, kUnicodeMinus.size()) == kUnicodeMinus) {
      out.push_back({TokenKind::op, std::string(kUnicodeMinus), start});
      i += kUnicodeMinus.size();
    } else if (c == '(') {
      out.push_back({TokenKind::lparen, "(", start});
      ++i;
    } else if (c == ')') {
      out.push_back({TokenKind::rparen, ")", start});
      ++i;
    } else if (c == ',') {
      out.push_back({TokenKind::comma, ",", start});
      ++i;
    } else {
      throw LexError(i, "unexpected character '" + std::string(1, c) + "' at offset " +
                            std::to_string(i));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  Parser(std::string_view src, std::vector<Token> tokens)
      : src_(src), tokens_(std::move(tokens)) {}

  Expr parse_all() {
    Expr e = parse_expr();
    if (pos_ < tokens_.size()) {
      fail("end of input", "unexpected '" + tokens_[pos_].lexeme + "'");
    }
    return e;
  }

 private:
  const Token* peek() const { return pos_ < tokens_.size() ? &tokens_[pos_] : nullptr; }

  std::size_t offset() const { return pos_ < tokens_.size() ? tokens_[pos_].position : src_.size(); }

  [[noreturn]] void fail(const std::string& expected, const std::string& found) const {
    throw ParseError(offset(), expected,
                     "expected " + expected + " at offset " + std::to_string(offset()) + ", " +
                         found);
  }

  [[noreturn]] void fail_expected(const std::string& expected) const {
    if (const Token* tok = peek()) fail(expected, "found '" + tok->lexeme + "'");
    fail(expected, "found end of input");
  }

  bool at_op(std::string_view op) const {
    const Token* tok = peek();
    if (tok == nullptr || tok->kind != TokenKind::op) return false;
    if (op == "-") return tok->lexeme == "-" || tok->lexeme == kUnicodeMinus;
    return tok->lexeme == op;
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    while (at_op("+") || at_op("-")) {
      const Token& tok = tokens_[pos_++];
      const NodeKind op = tok.lexeme == "+" ? NodeKind::add : NodeKind::sub;
      lhs = Expr::binary(op, lhs, parse_term(), tok.position);
    }
    return lhs;
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    while (at_op("*") || at_op("/")) {
      const Token& tok = tokens_[pos_++];
      const NodeKind op = tok.lexeme == "*" ? NodeKind::mul : NodeKind::div;
      lhs = Expr::binary(op, lhs, parse_unary(), tok.position);
    }
    return lhs;
  }

  Expr parse_unary() {
    if (at_op("-")) {
      const std::size_t p = tokens_[pos_++].position;
      return Expr::unary_neg(parse_unary(), p);
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (at_op("^")) {
      const std::size_t p = tokens_[pos_++].position;
      return Expr::binary(NodeKind::pow, base, parse_unary(), p);
    }
    return base;
  }

  Expr parse_atom() {
    const Token* tok = peek();
    if (tok == nullptr) fail("operand", "found end of input");
    switch (tok->kind) {
      case TokenKind::number: {
        ++pos_;
        double v = 0.0;
        const char* first = tok->lexeme.data();
        const char* last = first + tok->lexeme.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
          throw ParseError(tok->position, "number", "number out of range: " + tok->lexeme);
        }
        return Expr::constant(v, tok->position);
      }
      case TokenKind::variable:
        ++pos_;
        return Expr::variable(tok->lexeme == "t" ? Var::t : Var::x, tok->position);
      case TokenKind::ident:
        return parse_ident();
      case TokenKind::lparen: {
        ++pos_;
        Expr inner = parse_expr();
        expect(TokenKind::rparen, "')'");
        return inner;
      }
      default:
        fail_expected("operand");
    }
  }

  Expr parse_ident() {
    const Token& tok = tokens_[pos_++];
    if (tok.lexeme == "pi") return Expr::constant(std::numbers::pi, tok.position);
    const auto fn = builtin_from_name(tok.lexeme);
    if (!fn) {
      throw ParseError(tok.position, "builtin function",
                       "unknown identifier '" + tok.lexeme + "' at offset " +
                           std::to_string(tok.position));
    }
    expect(TokenKind::lparen, "'(' after " + tok.lexeme);
    std::vector<Expr> args;
    args.push_back(parse_expr());
    while (peek() != nullptr && peek()->kind == TokenKind::comma) {
      ++pos_;
      args.push_back(parse_expr());
    }
    expect(TokenKind::rparen, "')'");
    if (args.size() != builtin_arity(*fn)) {
      throw ParseError(tok.position, std::to_string(builtin_arity(*fn)) + " arguments",
                       tok.lexeme + " takes " + std::to_string(builtin_arity(*fn)) +
                           " argument(s), got " + std::to_string(args.size()));
    }
    return Expr::call(*fn, std::move(args), tok.position);
  }

  void expect(TokenKind kind, const std::string& what) {
    const Token* tok = peek();
    if (tok == nullptr || tok->kind != kind) fail_expected(what);
    ++pos_;
  }

  std::string_view src_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view src) { return Parser(src, tokenize(src)).parse_all(); }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

[[noreturn]] void domain_fail(const Expr& e, const std::string& why) {
  throw DomainError(to_string(e), e.position(), why + " in '" + to_string(e) + "'");
}

double checked(const Expr& e, double v) {
  if (!std::isfinite(v)) domain_fail(e, "non-finite result");
  return v;
}

double eval_node(const Expr& e, double t, double x) {
  switch (e.kind()) {
    case NodeKind::constant:
      return e.value();
    case NodeKind::var_t:
      return t;
    case NodeKind::var_x:
      return x;
    case NodeKind::neg:
      return -eval_node(e.child(0), t, x);
    case NodeKind::add:
      return checked(e, eval_node(e.child(0), t, x) + eval_node(e.child(1), t, x));
    case NodeKind::sub:
      return checked(e, eval_node(e.child(0), t, x) - eval_node(e.child(1), t, x));
    case NodeKind::mul:
      return checked(e, eval_node(e.child(0), t, x) * eval_node(e.child(1), t, x));
    case NodeKind::div: {
      const double num = eval_node(e.child(0), t, x);
      const double den = eval_node(e.child(1), t, x);
      if (den == 0.0) domain_fail(e, "division by zero");
      return checked(e, num / den);
    }
    case NodeKind::pow: {
      const double base = eval_node(e.child(0), t, x);
      const double ex = eval_node(e.child(1), t, x);
      if (base < 0.0 && std::trunc(ex) != ex) {
        domain_fail(e, "negative base with non-integer exponent");
      }
      if (base == 0.0 && ex < 0.0) domain_fail(e, "division by zero");
      return checked(e, std::pow(base, ex));
    }
    case NodeKind::call:
      break;
  }

  const double a0 = eval_node(e.child(0), t, x);
  switch (e.builtin()) {
    case Builtin::floor:
      return std::floor(a0);
    case Builtin::abs:
      return std::fabs(a0);
    case Builtin::sqrt:
      if (a0 < 0.0) domain_fail(e, "sqrt of negative value");
      return std::sqrt(a0);
    case Builtin::exp:
      return checked(e, std::exp(a0));
    case Builtin::ln:
      if (a0 <= 0.0) domain_fail(e, "ln of non-positive value");
      return std::log(a0);
    case Builtin::sin:
      return std::sin(a0);
    case Builtin::cos:
      return std::cos(a0);
    default:
      break;
  }

  const double a1 = eval_node(e.child(1), t, x);
  switch (e.builtin()) {
    case Builtin::min:
      return std::min(a0, a1);
    case Builtin::max:
      return std::max(a0, a1);
    case Builtin::ge:
      return a0 >= a1 ? 1.0 : 0.0;
    case Builtin::gt:
      return a0 > a1 ? 1.0 : 0.0;
    case Builtin::le:
      return a0 <= a1 ? 1.0 : 0.0;
    case Builtin::lt:
      return a0 < a1 ? 1.0 : 0.0;
    case Builtin::clamp: {
      const double hi = eval_node(e.child(2), t, x);
      if (a1 > hi) domain_fail(e, "clamp with lower bound above upper bound");
      return std::clamp(a0, a1, hi);
    }
    default:
      throw std::logic_error("unhandled builtin");
  }
}

}  // namespace

double eval(const Expr& e, double t, double x) {
  if (!std::isfinite(t) || !std::isfinite(x)) {
    throw DomainError(to_string(e), e.position(), "non-finite argument");
  }
  return eval_node(e, t, x);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Binding strength of the production a node prints as.
int precedence(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::add:
    case NodeKind::sub:
      return 1;
    case NodeKind::mul:
    case NodeKind::div:
      return 2;
    case NodeKind::neg:
      return 3;
    case NodeKind::pow:
      return 4;
    default:
      return 5;
  }
}

std::string format_number(double v) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

void print(const Expr& e, std::string& out);

void print_at_least(const Expr& e, int min_prec, std::string& out) {
  if (precedence(e) < min_prec) {
    out += '(';
    print(e, out);
    out += ')';
  } else {
    print(e, out);
  }
}

void print(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case NodeKind::constant:
      out += format_number(e.value());
      return;
    case NodeKind::var_t:
      out += 't';
      return;
    case NodeKind::var_x:
      out += 'x';
      return;
    case NodeKind::neg:
      out += '-';
      print_at_least(e.child(0), 3, out);
      return;
    case NodeKind::add:
    case NodeKind::sub:
      print_at_least(e.child(0), 1, out);
      out += e.kind() == NodeKind::add ? " + " : " - ";
      print_at_least(e.child(1), 2, out);
      return;
    case NodeKind::mul:
    case NodeKind::div:
      print_at_least(e.child(0), 2, out);
      out += e.kind() == NodeKind::mul ? '*' : '/';
      print_at_least(e.child(1), 3, out);
      return;
    case NodeKind::pow:
      print_at_least(e.child(0), 5, out);
      out += '^';
      print_at_least(e.child(1), 3, out);
      return;
    case NodeKind::call:
      out += builtin_name(e.builtin());
      out += '(';
      for (std::size_t i = 0; i < e.arity(); ++i) {
        if (i > 0) out += ", ";
        print(e.child(i), out);
      }
      out += ')';
      return;
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Structural analysis

bool depends_on(const Expr& e, Var v) {
  if (e.kind() == NodeKind::var_t) return v == Var::t;
  if (e.kind() == NodeKind::var_x) return v == Var::x;
  for (std::size_t i = 0; i < e.arity(); ++i) {
    if (depends_on(e.child(i), v)) return true;
  }
  return false;
}

std::optional<double> fold_constant(const Expr& e) {
  if (depends_on(e, Var::t) || depends_on(e, Var::x)) return std::nullopt;
  try {
    return eval(e, 0.0, 0.0);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

std::optional<int> degree(const Expr& e, Var v) {
  if (!depends_on(e, v)) return 0;
  switch (e.kind()) {
    case NodeKind::var_t:
    case NodeKind::var_x:
      return 1;
    case NodeKind::neg:
      return degree(e.child(0), v);
    case NodeKind::add:
    case NodeKind::sub: {
      const auto l = degree(e.child(0), v);
      const auto r = degree(e.child(1), v);
      if (!l || !r) return std::nullopt;
      return std::max(*l, *r);
    }
    case NodeKind::mul: {
      const auto l = degree(e.child(0), v);
      const auto r = degree(e.child(1), v);
      if (!l || !r) return std::nullopt;
      return *l + *r;
    }
    case NodeKind::div:
      if (depends_on(e.child(1), v)) return std::nullopt;
      return degree(e.child(0), v);
    case NodeKind::pow: {
      if (depends_on(e.child(1), v)) return std::nullopt;
      const auto ex = fold_constant(e.child(1));
      const auto base = degree(e.child(0), v);
      if (!ex || !base || *ex < 0.0 || std::trunc(*ex) != *ex || *ex > 64.0) return std::nullopt;
      return *base * static_cast<int>(*ex);
    }
    default:
      return std::nullopt;
  }
}

Expr scaled(double c, const Expr& e) { return Expr::binary(NodeKind::mul, Expr::constant(c), e); }


Expr bind(const Expr& e, Var v, double value) {
  const NodeKind target = v == Var::t ? NodeKind::var_t : NodeKind::var_x;
  switch (e.kind()) {
    case NodeKind::constant:
      return e;
    case NodeKind::var_t:
    case NodeKind::var_x:
      return e.kind() == target ? Expr::constant(value, e.position()) : e;
    case NodeKind::neg:
      return Expr::unary_neg(bind(e.child(0), v, value), e.position());
    case NodeKind::call: {
      std::vector<Expr> args;
      for (std::size_t i = 0; i < e.arity(); ++i) args.push_back(bind(e.child(i), v, value));
      return Expr::call(e.builtin(), std::move(args), e.position());
    }
    default:
      return Expr::binary(e.kind(), bind(e.child(0), v, value), bind(e.child(1), v, value),
                          e.position());
  }
}

}  // namespace irb::expr
