#include "rollekit/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>
#include <vector>

namespace rollekit {
namespace detail {

enum class Kind {
  number,
  pi_const,
  e_const,
  variable,
  sum,
  product,
  quotient,
  power,  // integer exponent
  negate,
  sin_fn,
  cos_fn,
  exp_fn,
};

struct ExprNode {
  Kind kind;
  double value = 0.0;  // number
  int exponent = 0;    // power
  NodePtr a, b;
};

namespace {

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr num(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::number;
  n->value = v;
  return n;
}

NodePtr pow_i(NodePtr base, int k) {
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::power;
  n->exponent = k;
  n->a = std::move(base);
  return n;
}

NodePtr sum(NodePtr a, NodePtr b) { return make(Kind::sum, std::move(a), std::move(b)); }
NodePtr prod(NodePtr a, NodePtr b) { return make(Kind::product, std::move(a), std::move(b)); }
NodePtr quot(NodePtr a, NodePtr b) { return make(Kind::quotient, std::move(a), std::move(b)); }
NodePtr neg(NodePtr a) { return make(Kind::negate, std::move(a)); }

constexpr double kPi = 3.14159265358979323846;
constexpr double kE = 2.71828182845904523536;

bool is_numeric_leaf(const NodePtr& n) {
  return n->kind == Kind::number || n->kind == Kind::pi_const || n->kind == Kind::e_const;
}

double leaf_value(const NodePtr& n) {
  switch (n->kind) {
    case Kind::number:
      return n->value;
    case Kind::pi_const:
      return kPi;
    case Kind::e_const:
      return kE;
    default:
      return 0.0;  // unreachable
  }
}

bool is_number(const NodePtr& n, double v) { return n->kind == Kind::number && n->value == v; }

// x^k by repeated multiplication so that e.g. x^2 is exactly x*x.
double int_pow(double base, int k) {
  if (k < 0) {
    if (std::abs(base) < std::numeric_limits<double>::min()) {
      throw DivisionByZeroError("negative power of zero base");
    }
    return 1.0 / int_pow(base, -k);
  }
  double r = 1.0;
  double b = base;
  while (k > 0) {
    if (k & 1) r *= b;
    b *= b;
    k >>= 1;
  }
  return r;
}

double eval_node(const ExprNode& n, double x) {
  switch (n.kind) {
    case Kind::number:
      return n.value;
    case Kind::pi_const:
      return kPi;
    case Kind::e_const:
      return kE;
    case Kind::variable:
      return x;
    case Kind::sum:
      return eval_node(*n.a, x) + eval_node(*n.b, x);
    case Kind::product:
      return eval_node(*n.a, x) * eval_node(*n.b, x);
    case Kind::quotient: {
      const double den = eval_node(*n.b, x);
      if (std::abs(den) < std::numeric_limits<double>::min()) {
        throw DivisionByZeroError("quotient denominator vanishes at x = " + std::to_string(x));
      }
      return eval_node(*n.a, x) / den;
    }
    case Kind::power:
      return int_pow(eval_node(*n.a, x), n.exponent);
    case Kind::negate:
      return -eval_node(*n.a, x);
    case Kind::sin_fn:
      return std::sin(eval_node(*n.a, x));
    case Kind::cos_fn:
      return std::cos(eval_node(*n.a, x));
    case Kind::exp_fn:
      return std::exp(eval_node(*n.a, x));
  }
  return 0.0;  // unreachable
}

bool contains_variable(const ExprNode& n) {
  if (n.kind == Kind::variable) return true;
  if (n.a && contains_variable(*n.a)) return true;
  if (n.b && contains_variable(*n.b)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// simplification: bottom-up local rewrites, repeated to a fixpoint
// ---------------------------------------------------------------------------

NodePtr simplify_node(const NodePtr& n, bool& changed);

NodePtr rewrite_local(NodePtr n, bool& changed) {
  switch (n->kind) {
    case Kind::sum:
      if (is_number(n->a, 0.0)) {
        changed = true;
        return n->b;
      }
      if (is_number(n->b, 0.0)) {
        changed = true;
        return n->a;
      }
      if (is_numeric_leaf(n->a) && is_numeric_leaf(n->b)) {
        changed = true;
        return num(leaf_value(n->a) + leaf_value(n->b));
      }
      break;
    case Kind::product:
      if (is_number(n->a, 0.0) || is_number(n->b, 0.0)) {
        changed = true;
        return num(0.0);
      }
      if (is_number(n->a, 1.0)) {
        changed = true;
        return n->b;
      }
      if (is_number(n->b, 1.0)) {
        changed = true;
        return n->a;
      }
      if (is_number(n->a, -1.0)) {
        changed = true;
        return neg(n->b);
      }
      if (is_number(n->b, -1.0)) {
        changed = true;
        return neg(n->a);
      }
      if (is_numeric_leaf(n->a) && is_numeric_leaf(n->b)) {
        changed = true;
        return num(leaf_value(n->a) * leaf_value(n->b));
      }
      break;
    case Kind::quotient:
      if (is_number(n->a, 0.0)) {
        changed = true;
        return num(0.0);
      }
      if (is_number(n->b, 1.0)) {
        changed = true;
        return n->a;
      }
      if (is_numeric_leaf(n->a) && is_numeric_leaf(n->b) && leaf_value(n->b) != 0.0) {
        changed = true;
        return num(leaf_value(n->a) / leaf_value(n->b));
      }
      break;
    case Kind::power:
      if (n->exponent == 0) {
        changed = true;
        return num(1.0);
      }
      if (n->exponent == 1) {
        changed = true;
        return n->a;
      }
      if (is_numeric_leaf(n->a) && !(leaf_value(n->a) == 0.0 && n->exponent < 0)) {
        changed = true;
        return num(int_pow(leaf_value(n->a), n->exponent));
      }
      break;
    case Kind::negate:
      if (n->a->kind == Kind::negate) {
        changed = true;
        return n->a->a;
      }
      if (is_numeric_leaf(n->a)) {
        changed = true;
        const double v = leaf_value(n->a);
        return num(v == 0.0 ? 0.0 : -v);
      }
      break;
    default:
      // sin/cos/exp of a constant stay symbolic until numeric eval.
      break;
  }
  return n;
}

NodePtr simplify_node(const NodePtr& n, bool& changed) {
  NodePtr a = n->a ? simplify_node(n->a, changed) : nullptr;
  NodePtr b = n->b ? simplify_node(n->b, changed) : nullptr;
  NodePtr cur = n;
  if (a != n->a || b != n->b) {
    auto copy = std::make_shared<ExprNode>(*n);
    copy->a = std::move(a);
    copy->b = std::move(b);
    cur = copy;
  }
  bool local = true;
  while (local) {
    local = false;
    cur = rewrite_local(cur, local);
    if (local) changed = true;
  }
  return cur;
}

NodePtr simplify_tree(NodePtr n) {
  for (int pass = 0; pass < 64; ++pass) {
    bool changed = false;
    n = simplify_node(n, changed);
    if (!changed) break;
  }
  return n;
}

// ---------------------------------------------------------------------------
// differentiation
// ---------------------------------------------------------------------------

NodePtr d1(const NodePtr& n) {
  switch (n->kind) {
    case Kind::number:
    case Kind::pi_const:
    case Kind::e_const:
      return num(0.0);
    case Kind::variable:
      return num(1.0);
    case Kind::sum:
      return sum(d1(n->a), d1(n->b));
    case Kind::product:
      return sum(prod(d1(n->a), n->b), prod(n->a, d1(n->b)));
    case Kind::quotient:
      return quot(sum(prod(d1(n->a), n->b), neg(prod(n->a, d1(n->b)))), pow_i(n->b, 2));
    case Kind::power:
      return prod(prod(num(static_cast<double>(n->exponent)), pow_i(n->a, n->exponent - 1)),
                  d1(n->a));
    case Kind::negate:
      return neg(d1(n->a));
    case Kind::sin_fn:
      return prod(make(Kind::cos_fn, n->a), d1(n->a));
    case Kind::cos_fn:
      return neg(prod(make(Kind::sin_fn, n->a), d1(n->a)));
    case Kind::exp_fn:
      return prod(make(Kind::exp_fn, n->a), d1(n->a));
  }
  return num(0.0);  // unreachable
}

// ---------------------------------------------------------------------------
// pretty printer (minimal parentheses, honoring this grammar's precedence)
// ---------------------------------------------------------------------------

// sum = 1, product/quotient = 2, power = 3, negate = 4, atoms/calls = 5
int precedence(const ExprNode& n) {
  switch (n.kind) {
    case Kind::sum:
      return 1;
    case Kind::product:
    case Kind::quotient:
      return 2;
    case Kind::power:
      return 3;
    case Kind::negate:
      return 4;
    default:
      return 5;
  }
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void print_node(const ExprNode& n, int min_prec, std::string& out);

void print_wrapped(const ExprNode& n, int min_prec, std::string& out) {
  if (precedence(n) < min_prec) {
    out += '(';
    print_node(n, 0, out);
    out += ')';
  } else {
    print_node(n, min_prec, out);
  }
}

void print_node(const ExprNode& n, int /*min_prec*/, std::string& out) {
  switch (n.kind) {
    case Kind::number:
      out += fmt17(n.value);
      return;
    case Kind::pi_const:
      out += "pi";
      return;
    case Kind::e_const:
      out += "e";
      return;
    case Kind::variable:
      out += "x";
      return;
    case Kind::sum:
      print_wrapped(*n.a, 1, out);
      if (n.b->kind == Kind::negate) {
        out += " - ";
        print_wrapped(*n.b->a, 2, out);
      } else {
        out += " + ";
        print_wrapped(*n.b, 2, out);
      }
      return;
    case Kind::product:
      print_wrapped(*n.a, 2, out);
      out += "*";
      print_wrapped(*n.b, 3, out);
      return;
    case Kind::quotient:
      print_wrapped(*n.a, 2, out);
      out += "/";
      print_wrapped(*n.b, 3, out);
      return;
    case Kind::power:
      print_wrapped(*n.a, 4, out);
      out += "^";
      out += std::to_string(n.exponent);
      return;
    case Kind::negate:
      out += "-";
      print_wrapped(*n.a, 5, out);
      return;
    case Kind::sin_fn:
    case Kind::cos_fn:
    case Kind::exp_fn:
      out += n.kind == Kind::sin_fn ? "sin(" : n.kind == Kind::cos_fn ? "cos(" : "exp(";
      print_node(*n.a, 0, out);
      out += ')';
      return;
  }
}

std::string print_tree(const NodePtr& n) {
  std::string out;
  print_node(*n, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// lexer + recursive-descent parser
// ---------------------------------------------------------------------------

struct Token {
  enum class Type { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };
  Type type;
  double value = 0.0;
  std::string text;
  std::size_t pos = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) { advance(); }

  NodePtr parse() {
    NodePtr e = parse_expression();
    if (tok_.type != Token::Type::end) {
      fail("unexpected '" + describe(tok_) + "', expected operator or end of input");
    }
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError("syntax error at position " + std::to_string(tok_.pos) + ": " + msg,
                     tok_.pos);
  }

  static std::string describe(const Token& t) {
    if (t.type == Token::Type::end) return "end of input";
    return t.text;
  }

  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    tok_.pos = pos_;
    if (pos_ >= text_.size()) {
      tok_ = Token{Token::Type::end, 0.0, "", pos_};
      return;
    }
    const char c = text_[pos_];
    switch (c) {
      case '+':
        tok_ = Token{Token::Type::plus, 0.0, "+", pos_++};
        return;
      case '-':
        tok_ = Token{Token::Type::minus, 0.0, "-", pos_++};
        return;
      case '*':
        tok_ = Token{Token::Type::star, 0.0, "*", pos_++};
        return;
      case '/':
        tok_ = Token{Token::Type::slash, 0.0, "/", pos_++};
        return;
      case '^':
        tok_ = Token{Token::Type::caret, 0.0, "^", pos_++};
        return;
      case '(':
        tok_ = Token{Token::Type::lparen, 0.0, "(", pos_++};
        return;
      case ')':
        tok_ = Token{Token::Type::rparen, 0.0, ")", pos_++};
        return;
      default:
        break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      lex_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      tok_ = Token{Token::Type::ident, 0.0, std::string(text_.substr(start, pos_ - start)), start};
      return;
    }
    tok_.pos = pos_;
    tok_.text = std::string(1, c);
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  void lex_number() {
    const std::size_t start = pos_;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double v = 0.0;
    auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc()) {
      tok_.pos = start;
      tok_.text = std::string(1, text_[start]);
      fail("malformed numeric literal");
    }
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    tok_ = Token{Token::Type::number, v, std::string(text_.substr(start, pos_ - start)), start};
  }

  bool accept(Token::Type t) {
    if (tok_.type == t) {
      advance();
      return true;
    }
    return false;
  }

  NodePtr parse_expression() {
    NodePtr left = parse_term();
    for (;;) {
      if (accept(Token::Type::plus)) {
        left = sum(std::move(left), parse_term());
      } else if (accept(Token::Type::minus)) {
        left = sum(std::move(left), neg(parse_term()));
      } else {
        return left;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr left = parse_power();
    for (;;) {
      if (accept(Token::Type::star)) {
        left = prod(std::move(left), parse_power());
      } else if (accept(Token::Type::slash)) {
        left = quot(std::move(left), parse_power());
      } else {
        return left;
      }
    }
  }

  NodePtr parse_power() {
    NodePtr base = parse_unary();
    while (tok_.type == Token::Type::caret) {
      advance();
      base = pow_i(std::move(base), parse_int_exponent());
    }
    return base;
  }

  int parse_int_exponent() {
    bool negate_exp = false;
    if (accept(Token::Type::minus)) negate_exp = true;
    if (tok_.type != Token::Type::number ||
        tok_.text.find_first_not_of("0123456789") != std::string::npos) {
      fail("expected integer exponent after '^'");
    }
    long k = 0;
    for (char c : tok_.text) {
      k = k * 10 + (c - '0');
      if (k > 1000000) fail("integer exponent too large");
    }
    advance();
    return static_cast<int>(negate_exp ? -k : k);
  }

  NodePtr parse_unary() {
    if (accept(Token::Type::minus)) return neg(parse_unary());
    return parse_primary();
  }

  NodePtr parse_primary() {
    if (tok_.type == Token::Type::number) {
      NodePtr n = num(tok_.value);
      advance();
      return n;
    }
    if (tok_.type == Token::Type::ident) {
      const std::string name = tok_.text;
      const std::size_t name_pos = tok_.pos;
      advance();
      if (name == "x") return make(Kind::variable);
      if (name == "pi") return make(Kind::pi_const);
      if (name == "e") return make(Kind::e_const);
      Kind fn;
      if (name == "sin") {
        fn = Kind::sin_fn;
      } else if (name == "cos") {
        fn = Kind::cos_fn;
      } else if (name == "exp") {
        fn = Kind::exp_fn;
      } else {
        throw UnknownIdentifierError(
            "unknown identifier '" + name + "' at position " + std::to_string(name_pos),
            name_pos);
      }
      if (!accept(Token::Type::lparen)) fail("expected '(' after '" + name + "'");
      NodePtr arg = parse_expression();
      if (!accept(Token::Type::rparen)) fail("expected ')'");
      return make(fn, std::move(arg));
    }
    if (accept(Token::Type::lparen)) {
      NodePtr e = parse_expression();
      if (!accept(Token::Type::rparen)) fail("expected ')'");
      return e;
    }
    fail("unexpected '" + describe(tok_) + "', expected number, identifier, or '('");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token tok_;
};

}  // namespace
}  // namespace detail

Expression::Expression(detail::NodePtr root, std::string source)
    : root_(std::move(root)), source_(std::move(source)) {}

Expression Expression::parse(std::string_view text) {
  detail::Parser parser(text);
  detail::NodePtr root = parser.parse();
  return Expression(std::move(root), std::string(text));
}

double Expression::eval(double x) const { return detail::eval_node(*root_, x); }

Expression Expression::derivative(int order) const {
  if (order < 0) throw Error("derivative order must be >= 0");
  detail::NodePtr n = root_;
  for (int i = 0; i < order; ++i) {
    n = detail::simplify_tree(detail::d1(n));
  }
  return Expression(n, detail::print_tree(n));
}

Expression Expression::simplified() const {
  detail::NodePtr n = detail::simplify_tree(root_);
  return Expression(n, detail::print_tree(n));
}

bool Expression::is_constant() const { return !detail::contains_variable(*root_); }

std::string Expression::to_string() const { return detail::print_tree(root_); }

Expression parse(std::string_view text) { return Expression::parse(text); }
Expression differentiate(const Expression& e, int order) { return e.derivative(order); }
Expression simplify(const Expression& e) { return e.simplified(); }
double eval(const Expression& e, double x) { return e.eval(x); }

}  // namespace rollekit
