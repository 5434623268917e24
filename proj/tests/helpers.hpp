#pragma once

#include <cmath>
#include <random>

#include "rollekit/rolle.hpp"

namespace testutil {

constexpr double kPi = 3.14159265358979323846;

// f = e^x sin x over {0, 3pi/2}.
inline rollekit::InterpolationProblem example1() {
  return rollekit::make_problem(rollekit::Expression::parse("exp(x)*sin(x)"),
                                rollekit::NodeSet({0.0, 1.5 * kPi}));
}

// f = e^x sin x over {0, 2, 3pi/2}.
inline rollekit::InterpolationProblem example2() {
  return rollekit::make_problem(rollekit::Expression::parse("exp(x)*sin(x)"),
                                rollekit::NodeSet({0.0, 2.0, 1.5 * kPi}));
}

inline bool rel_close(double got, double want, double tol) {
  return std::abs(got - want) <= tol * (1.0 + std::abs(want));
}

inline std::mt19937 rng(unsigned seed = 20240901u) { return std::mt19937(seed); }

}  // namespace testutil
