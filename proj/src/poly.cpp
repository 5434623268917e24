#include "rollekit/poly.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

namespace rollekit {

namespace {

void normalize(std::vector<double>& c) {
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  if (c.empty()) c.push_back(0.0);
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw Error("non-finite polynomial coefficient");
  }
  normalize(coeffs_);
}

double Polynomial::operator()(double x) const {
  double r = 0.0;
  for (std::size_t i = coeffs_.size(); i-- > 0;) r = r * x + coeffs_[i];
  return r;
}

bool Polynomial::is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }

int Polynomial::degree() const {
  return is_zero() ? -1 : static_cast<int>(coeffs_.size()) - 1;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() == 1) return Polynomial();
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    d[k - 1] = static_cast<double>(k) * coeffs_[k];
  }
  return Polynomial(std::move(d));
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
  std::vector<double> c(std::max(coeffs_.size(), rhs.coeffs_.size()), 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) c[i] += rhs.coeffs_[i];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const {
  std::vector<double> c(std::max(coeffs_.size(), rhs.coeffs_.size()), 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) c[i] -= rhs.coeffs_[i];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
  if (is_zero() || rhs.is_zero()) return Polynomial();
  std::vector<double> c(coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) {
      c[i + j] += coeffs_[i] * rhs.coeffs_[j];
    }
  }
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(double s) const {
  std::vector<double> c(coeffs_);
  for (double& v : c) v *= s;
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator/(double s) const {
  if (s == 0.0) throw DivisionByZeroError("polynomial divided by zero scalar");
  std::vector<double> c(coeffs_);
  for (double& v : c) v /= s;
  return Polynomial(std::move(c));
}

Polynomial Polynomial::from_roots(std::span<const double> roots) {
  std::vector<double> c{1.0};
  for (double r : roots) {
    c.push_back(0.0);
    for (std::size_t i = c.size() - 1; i > 0; --i) {
      c[i] = c[i - 1] - r * c[i];
    }
    c[0] = -r * c[0];
  }
  return Polynomial(std::move(c));
}

NodeSet::NodeSet(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw Error("node set must contain at least one node");
  for (double x : nodes_) {
    if (!std::isfinite(x)) throw Error("nodes must be finite");
  }
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i - 1] < nodes_[i])) {
      throw Error("nodes must be strictly increasing");
    }
  }
}

bool NodeSet::is_node(double x) const {
  return std::binary_search(nodes_.begin(), nodes_.end(), x);
}

Polynomial lagrange_interpolate(const NodeSet& nodes, std::span<const double> values) {
  const std::size_t m = nodes.count();
  if (values.size() != m) throw Error("value count must match node count");

  // Divided-difference coefficients, then expand the Newton form.
  std::vector<double> dd(values.begin(), values.end());
  for (std::size_t level = 1; level < m; ++level) {
    for (std::size_t i = m - 1; i >= level; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - level]);
    }
  }
  Polynomial p = Polynomial::constant(dd[m - 1]);
  for (std::size_t i = m - 1; i-- > 0;) {
    p = p * Polynomial({-nodes[i], 1.0}) + Polynomial::constant(dd[i]);
  }
  return p;
}

Polynomial lagrange_interpolate(const Expression& f, const NodeSet& nodes) {
  std::vector<double> values(nodes.count());
  for (std::size_t k = 0; k < nodes.count(); ++k) values[k] = f.eval(nodes[k]);
  return lagrange_interpolate(nodes, values);
}

NodePolynomials node_polynomial(const NodeSet& nodes) {
  Polynomial pi = Polynomial::from_roots(nodes.values());
  return NodePolynomials{pi, pi.derivative()};
}

namespace {

// Chebyshev T_j as monomial polynomials in the mapped variable t.
std::vector<Polynomial> chebyshev_basis(int degree) {
  std::vector<Polynomial> T;
  T.reserve(degree + 1);
  T.push_back(Polynomial::constant(1.0));
  if (degree >= 1) T.push_back(Polynomial({0.0, 1.0}));
  const Polynomial two_t({0.0, 2.0});
  for (int j = 2; j <= degree; ++j) {
    T.push_back(two_t * T[j - 1] - T[j - 2]);
  }
  return T;
}

// p(L(x)) for linear L, by Horner over polynomials.
Polynomial compose_linear(const Polynomial& p, const Polynomial& linear) {
  const auto& c = p.coeffs();
  Polynomial r = Polynomial::constant(c.back());
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    r = r * linear + Polynomial::constant(c[i]);
  }
  return r;
}

}  // namespace

Polynomial least_squares_fit(std::span<const Sample> samples, int degree) {
  if (degree < 0) throw Error("fit degree must be >= 0");
  const std::size_t m = samples.size();
  const std::size_t cols = static_cast<std::size_t>(degree) + 1;
  if (m < cols) {
    throw RankDeficiencyError("need at least degree+1 samples for a degree-" +
                              std::to_string(degree) + " fit");
  }
  std::set<double> distinct;
  double a = samples[0].x, b = samples[0].x;
  for (const Sample& s : samples) {
    distinct.insert(s.x);
    a = std::min(a, s.x);
    b = std::max(b, s.x);
  }
  if (distinct.size() < cols) {
    throw RankDeficiencyError("need at least degree+1 distinct abscissae, got " +
                              std::to_string(distinct.size()));
  }

  // Map [a, b] to [-1, 1]; with a == b only degree 0 is reachable and the
  // distinct-count check above has already enforced that.
  const double scale = (b > a) ? 2.0 / (b - a) : 0.0;
  const double shift = (b > a) ? -(a + b) / (b - a) : 0.0;

  Eigen::MatrixXd A(m, cols);
  Eigen::VectorXd y(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double t = scale * samples[i].x + shift;
    double tjm1 = 1.0, tj = t;
    A(i, 0) = 1.0;
    if (degree >= 1) A(i, 1) = t;
    for (int j = 2; j <= degree; ++j) {
      const double tj1 = 2.0 * t * tj - tjm1;
      tjm1 = tj;
      tj = tj1;
      A(i, j) = tj;
    }
    y(i) = samples[i].y;
  }

  Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);

  const auto T = chebyshev_basis(degree);
  Polynomial in_t;
  for (int j = 0; j <= degree; ++j) in_t = in_t + T[j] * c(j);
  return compose_linear(in_t, Polynomial({shift, scale}));
}

}  // namespace rollekit
