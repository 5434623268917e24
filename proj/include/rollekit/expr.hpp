#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "rollekit/errors.hpp"

namespace rollekit {

namespace detail {
struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;
}  // namespace detail

// Immutable parsed univariate expression over the grammar
//
//   expression := term (('+' | '-') term)*
//   term       := power (('*' | '/') power)*
//   power      := unary ('^' integer)*
//   unary      := '-' unary | primary
//   primary    := number | 'x' | 'pi' | 'e'
//               | ('sin' | 'cos' | 'exp') '(' expression ')'
//               | '(' expression ')'
//
// Unary minus binds tighter than '^', so -x^2 means (-x)^2. Exponents are
// integer literals (optionally negative). Expressions are immutable after
// construction and safe to evaluate from concurrent callers.
class Expression {
 public:
  // Parses text; throws ParseError / UnknownIdentifierError on bad input.
  static Expression parse(std::string_view text);

  // Numeric value at x. Throws DivisionByZeroError when a quotient
  // denominator is below machine tiny at x.
  double eval(double x) const;
  double operator()(double x) const { return eval(x); }

  // Exact k-th symbolic derivative, simplified. derivative(0) is *this.
  Expression derivative(int order = 1) const;

  // Rewrite-to-fixpoint simplification (constant folding, zero/one
  // elimination). Pointwise value preserving.
  Expression simplified() const;

  // True when the expression contains no occurrence of x.
  bool is_constant() const;

  // Pretty-print in the same grammar; re-parsing yields a pointwise-equal
  // expression.
  std::string to_string() const;

  // The text this expression was built from (pretty-printed form for
  // derived expressions).
  const std::string& source_text() const { return source_; }

 private:
  Expression(detail::NodePtr root, std::string source);

  detail::NodePtr root_;
  std::string source_;
};

// Free-function spellings of the operations above.
Expression parse(std::string_view text);
Expression differentiate(const Expression& e, int order);
Expression simplify(const Expression& e);
double eval(const Expression& e, double x);

}  // namespace rollekit
