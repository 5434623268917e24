#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rollekit {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed expression text. position() is the byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Identifier that is not x, pi, e, sin, cos or exp.
class UnknownIdentifierError : public ParseError {
 public:
  using ParseError::ParseError;
};

// Quotient denominator below machine tiny at the evaluation point.
class DivisionByZeroError : public Error {
 public:
  using Error::Error;
};

// Fewer distinct abscissae than fit coefficients.
class RankDeficiencyError : public Error {
 public:
  using Error::Error;
};

// The identity has no root in (x_0, x_n) at the requested abscissa.
class NoRootError : public Error {
 public:
  using Error::Error;
};

// f^(n+1) is identically constant: every xi satisfies the identity and the
// defining ODE degenerates. Callers handle this as a distinct condition.
class DegenerateDerivativeError : public Error {
 public:
  using Error::Error;
};

// |pi(x)| is numerically zero: x sits on (or hugs) an interpolation node.
class SingularNodeError : public Error {
 public:
  using Error::Error;
};

// |f^(n+2)(xi)| is numerically zero: the ODE right-hand side breaks down.
class SingularDerivativeError : public Error {
 public:
  using Error::Error;
};

// Re-anchoring after a node crossing found no root near the extrapolated xi.
class BranchLossError : public Error {
 public:
  using Error::Error;
};

// A computed xi left the open interval (x_0, x_n).
class EscapeError : public Error {
 public:
  using Error::Error;
};

// A trajectory query lacks the samples it needs (bracket or endpoint pair).
class InsufficientSamplesError : public Error {
 public:
  using Error::Error;
};

// Root polishing failed to reach the requested residual.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace rollekit
