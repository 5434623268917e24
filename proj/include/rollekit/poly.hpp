#pragma once

#include <span>
#include <vector>

#include "rollekit/errors.hpp"
#include "rollekit/expr.hpp"

namespace rollekit {

// Dense univariate polynomial, coeffs()[k] multiplies x^k. Trailing zero
// coefficients are normalized away; the zero polynomial is stored as {0}.
class Polynomial {
 public:
  Polynomial() : coeffs_{0.0} {}
  explicit Polynomial(std::vector<double> coeffs);

  static Polynomial constant(double c) { return Polynomial({c}); }
  static Polynomial from_roots(std::span<const double> roots);  // monic product

  // Horner evaluation: degree multiplies and adds.
  double operator()(double x) const;

  // -1 for the zero polynomial.
  int degree() const;
  bool is_zero() const;
  const std::vector<double>& coeffs() const { return coeffs_; }

  Polynomial derivative() const;

  Polynomial operator+(const Polynomial& rhs) const;
  Polynomial operator-(const Polynomial& rhs) const;
  Polynomial operator*(const Polynomial& rhs) const;
  Polynomial operator*(double s) const;
  Polynomial operator/(double s) const;

 private:
  std::vector<double> coeffs_;
};

// Strictly increasing finite interpolation nodes x_0 < x_1 < ... < x_n.
class NodeSet {
 public:
  explicit NodeSet(std::vector<double> nodes);

  std::size_t count() const { return nodes_.size(); }
  int n() const { return static_cast<int>(nodes_.size()) - 1; }
  double operator[](std::size_t k) const { return nodes_[k]; }
  double front() const { return nodes_.front(); }
  double back() const { return nodes_.back(); }
  const std::vector<double>& values() const { return nodes_; }

  // True when x coincides exactly with one of the nodes.
  bool is_node(double x) const;

 private:
  std::vector<double> nodes_;
};

struct NodePolynomials {
  Polynomial pi;        // monic product of (x - x_k)
  Polynomial pi_prime;  // its exact derivative
};

struct Sample {
  double x;
  double y;
};

// Interpolant of f at the nodes, built by Newton divided differences and
// expanded to coefficient form.
Polynomial lagrange_interpolate(const Expression& f, const NodeSet& nodes);
Polynomial lagrange_interpolate(const NodeSet& nodes, std::span<const double> values);

NodePolynomials node_polynomial(const NodeSet& nodes);

// Least-squares fit of degree <= d. Solved in a Chebyshev basis mapped to
// the sample interval via QR of the design matrix, then converted to
// monomial coefficients. Throws RankDeficiencyError with fewer than d+1
// distinct abscissae.
Polynomial least_squares_fit(std::span<const Sample> samples, int degree);

}  // namespace rollekit
