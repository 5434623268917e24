#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "rollekit/expr.hpp"

using rollekit::Expression;
using testutil::kPi;

TEST_CASE("parse and evaluate the paper objective") {
  const Expression e = Expression::parse("exp(x)*sin(x)");
  auto gen = testutil::rng();
  std::uniform_real_distribution<double> xs(-3.0, 5.0);
  for (int i = 0; i < 50; ++i) {
    const double x = xs(gen);
    CHECK(e.eval(x) == doctest::Approx(std::exp(x) * std::sin(x)).epsilon(1e-15));
  }
  CHECK(e.source_text() == "exp(x)*sin(x)");
}

TEST_CASE("constant and literal parsing") {
  CHECK(Expression::parse("0").eval(12.7) == 0.0);
  CHECK(Expression::parse("x^3").eval(2.0) == 8.0);
  CHECK(Expression::parse("1e-5").eval(0.0) == 1e-5);
  CHECK(Expression::parse("pi").eval(0.0) == doctest::Approx(kPi).epsilon(1e-16));
  CHECK(Expression::parse("e").eval(0.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-16));
}

TEST_CASE("the node expression x^2 - (3*pi/2)*x vanishes at 3*pi/2") {
  const Expression e = Expression::parse("x^2 - (3*pi/2)*x");
  const double node = Expression::parse("3*pi/2").eval(0.0);
  CHECK(e.eval(node) == 0.0);
  CHECK(e.eval(0.0) == 0.0);
}

TEST_CASE("unary minus binds tighter than power") {
  // -x^2 means (-x)^2 in this grammar
  CHECK(Expression::parse("-x^2").eval(3.0) == 9.0);
  CHECK(Expression::parse("-(x^2)").eval(3.0) == -9.0);
  CHECK(Expression::parse("x^-2").eval(2.0) == 0.25);
}

TEST_CASE("parse errors carry position and expectation") {
  CHECK_THROWS_AS(Expression::parse("x +"), rollekit::ParseError);
  CHECK_THROWS_AS(Expression::parse("(x"), rollekit::ParseError);
  CHECK_THROWS_AS(Expression::parse("x^2.5"), rollekit::ParseError);
  CHECK_THROWS_AS(Expression::parse("sin x"), rollekit::ParseError);
  CHECK_THROWS_AS(Expression::parse("tan(x)"), rollekit::UnknownIdentifierError);
  CHECK_THROWS_AS(Expression::parse("foo"), rollekit::UnknownIdentifierError);

  try {
    Expression::parse("2 * (x + ");
    FAIL("expected ParseError");
  } catch (const rollekit::ParseError& e) {
    CHECK(std::string(e.what()).find("position") != std::string::npos);
    CHECK(std::string(e.what()).find("expected") != std::string::npos);
    CHECK(e.position() > 0);
  }
  try {
    Expression::parse("x + bogus");
    FAIL("expected UnknownIdentifierError");
  } catch (const rollekit::UnknownIdentifierError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("division by a vanishing denominator signals") {
  CHECK_THROWS_AS(Expression::parse("1/x").eval(0.0), rollekit::DivisionByZeroError);
  CHECK_THROWS_AS(Expression::parse("x/(x - 1)").eval(1.0), rollekit::DivisionByZeroError);
  CHECK(Expression::parse("1/x").eval(2.0) == 0.5);
  CHECK_THROWS_AS(Expression::parse("x^-1").eval(0.0), rollekit::DivisionByZeroError);
}

TEST_CASE("first derivative of e^x sin x") {
  const Expression d = Expression::parse("exp(x)*sin(x)").derivative();
  auto gen = testutil::rng(7);
  std::uniform_real_distribution<double> xs(0.0, 1.5 * kPi);
  for (int i = 0; i < 30; ++i) {
    const double x = xs(gen);
    CHECK(d.eval(x) ==
          doctest::Approx(std::exp(x) * (std::sin(x) + std::cos(x))).epsilon(1e-13));
  }
}

TEST_CASE("derivative of a constant is zero") {
  const Expression d = Expression::parse("42.5").derivative();
  CHECK(d.is_constant());
  CHECK(d.eval(3.0) == 0.0);
  CHECK(Expression::parse("pi").derivative().eval(1.0) == 0.0);
}

// Closed form verified by induction: the k-th derivative of e^x sin x is
// 2^(k/2) e^x sin(x + k pi/4).
TEST_CASE("k-th derivatives match the closed form for k = 1..6") {
  const Expression f = Expression::parse("exp(x)*sin(x)");
  auto gen = testutil::rng(11);
  std::uniform_real_distribution<double> xs(0.0, 1.5 * kPi);
  for (int k = 1; k <= 6; ++k) {
    const Expression dk = f.derivative(k);
    for (int i = 0; i < 50; ++i) {
      const double x = xs(gen);
      const double want = std::pow(2.0, 0.5 * k) * std::exp(x) * std::sin(x + k * kPi / 4.0);
      CHECK(testutil::rel_close(dk.eval(x), want, 1e-10));
    }
  }
}

TEST_CASE("differentiation composes over orders") {
  const std::vector<Expression> exprs = {
      Expression::parse("exp(x)*sin(x)"),
      Expression::parse("x^4 - 2*x^2 + x"),
      Expression::parse("cos(x)/(x^2 + 1)"),
  };
  auto gen = testutil::rng(13);
  std::uniform_real_distribution<double> xs(-2.0, 2.0);
  for (const Expression& e : exprs) {
    const Expression once = e.derivative(3);
    const Expression twice = e.derivative(1).derivative(2);
    for (int i = 0; i < 20; ++i) {
      const double x = xs(gen);
      CHECK(testutil::rel_close(twice.eval(x), once.eval(x), 1e-10));
    }
    CHECK(e.derivative(0).to_string() == e.to_string());
  }
}

TEST_CASE("simplification preserves pointwise values") {
  const std::vector<std::string> texts = {
      "exp(x)*sin(x)", "x^3 - 2*x + 1/(x^2 + 1)", "(3*pi/2)*x - x^2 + 0*x",
      "1*sin(x) + 0",  "-(-(x))*1",               "cos(x)*cos(x) - sin(x)*exp(x)/2",
  };
  auto gen = testutil::rng(17);
  std::uniform_real_distribution<double> xs(-10.0, 10.0);
  for (const std::string& text : texts) {
    const Expression e = Expression::parse(text);
    const Expression s = e.simplified();
    for (int i = 0; i < 100; ++i) {
      const double x = xs(gen);
      const double ve = e.eval(x);
      CHECK(std::abs(s.eval(x) - ve) <= 1e-12 * (1.0 + std::abs(ve)));
    }
  }
}

TEST_CASE("simplification folds the obvious rewrites") {
  CHECK(Expression::parse("0*sin(x) + x").simplified().to_string() == "x");
  CHECK(Expression::parse("x^2").derivative(2).to_string() == "2");
  CHECK(Expression::parse("x*1 + 0").simplified().to_string() == "x");
  CHECK(Expression::parse("x^2").derivative(2).is_constant());
  // sin/cos/exp of constants stay symbolic
  CHECK(Expression::parse("sin(2)").simplified().to_string() == "sin(2)");
}

// |FD(h) - f'(x)| should be bounded by C h^2 and shrink ~4x as h halves.
TEST_CASE("finite differences agree with symbolic derivatives") {
  const std::vector<std::string> texts = {"exp(x)*sin(x)", "x^4 - 3*x^2 + 2*x",
                                          "sin(x)*cos(x) + x^2"};
  auto gen = testutil::rng(19);
  std::uniform_real_distribution<double> xs(0.0, 3.0);
  for (const std::string& text : texts) {
    const Expression f = Expression::parse(text);
    const Expression d1 = f.derivative(1);
    const Expression d3 = f.derivative(3);

    double c3 = 0.0;
    for (int i = 0; i <= 100; ++i) c3 = std::max(c3, std::abs(d3.eval(0.03 * i)));
    const double bound_c = c3 / 6.0;

    for (int i = 0; i < 50; ++i) {
      const double x = xs(gen);
      const double fscale = 1.0 + std::abs(f.eval(x));
      auto fd_err = [&](double h) {
        return std::abs((f.eval(x + h) - f.eval(x - h)) / (2.0 * h) - d1.eval(x));
      };

      const double h0 = 1e-5;
      CHECK(fd_err(h0) <= 2.0 * bound_c * h0 * h0 + 1e-10 * fscale);

      // ratio test in the truncation-dominated regime
      const double hr = 1e-3;
      const double e1 = fd_err(hr);
      const double e2 = fd_err(0.5 * hr);
      const double noise = 1e-12 * fscale / hr;
      if (e1 > 1000.0 * noise) {
        CHECK(e2 / e1 <= 0.35);
        CHECK(e2 / e1 >= 0.15);
      }
    }
  }
}

TEST_CASE("pretty-print round-trips through the parser") {
  const std::vector<std::string> texts = {
      "exp(x)*sin(x)",
      "x^2 - (3*pi/2)*x",
      "-x^2 + (x - 1)/(x^2 + 4)",
      "-(x^2)*cos(x - pi)",
      "2*e - x/(1 + 1/(1 + x^2))",
  };
  auto gen = testutil::rng(23);
  std::uniform_real_distribution<double> xs(-4.0, 4.0);
  for (const std::string& text : texts) {
    const Expression e = Expression::parse(text);
    const Expression r = Expression::parse(e.to_string());
    for (int i = 0; i < 20; ++i) {
      const double x = xs(gen);
      CHECK(testutil::rel_close(r.eval(x), e.eval(x), 1e-14));
    }
    // derived expressions round-trip too
    const Expression d = e.derivative();
    const Expression rd = Expression::parse(d.to_string());
    for (int i = 0; i < 20; ++i) {
      const double x = xs(gen);
      CHECK(testutil::rel_close(rd.eval(x), d.eval(x), 1e-14));
    }
  }
}

TEST_CASE("is_constant detects symbolic constants") {
  CHECK(Expression::parse("3*pi/2 + e").is_constant());
  CHECK_FALSE(Expression::parse("x").is_constant());
  CHECK(Expression::parse("x^2").derivative(2).is_constant());
  CHECK_FALSE(Expression::parse("x^3").derivative(2).is_constant());
  CHECK(Expression::parse("x^3").derivative(3).is_constant());
}
