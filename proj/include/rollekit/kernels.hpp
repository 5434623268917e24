#pragma once

#include <span>
#include <vector>

#include "rollekit/expr.hpp"
#include "rollekit/poly.hpp"
#include "rollekit/rolle.hpp"

// Data-parallel batch kernels. Every kernel comes in two flavors: the plain
// name runs the OpenMP loop (a no-op fallback when built without OpenMP) and
// the _serial suffix is the reference implementation kept for testing. Both
// flavors produce bitwise-identical results for any thread count: each output
// element is computed independently and reductions are max-only.
namespace rollekit::kernels {

// count evenly spaced points from a to b inclusive.
std::vector<double> linspace(double a, double b, std::size_t count);

void eval_expression_serial(const Expression& e, std::span<const double> xs,
                            std::span<double> out);
void eval_expression(const Expression& e, std::span<const double> xs, std::span<double> out);
std::vector<double> eval_expression(const Expression& e, std::span<const double> xs);

ReconstructionTable reconstruct_table_serial(const InterpolationProblem& prob,
                                             std::span<const double> x,
                                             std::span<const double> xi);
ReconstructionTable reconstruct_table(const InterpolationProblem& prob,
                                      std::span<const double> x, std::span<const double> xi);

// Pointwise |f - P_n| and |f - corrected| on a uniform grid over [x_0, x_n].
struct ErrorGrid {
  std::vector<double> x;
  std::vector<double> err_before;
  std::vector<double> err_after;
  double max_before = 0;
  double max_after = 0;
};

ErrorGrid error_grid_serial(const InterpolationProblem& prob, const Polynomial& corrected,
                            std::size_t points);
ErrorGrid error_grid(const InterpolationProblem& prob, const Polynomial& corrected,
                     std::size_t points);

// Largest normalized identity residual over (x, xi) sample pairs.
double max_identity_residual_serial(const InterpolationProblem& prob,
                                    std::span<const double> x, std::span<const double> xi);
double max_identity_residual(const InterpolationProblem& prob, std::span<const double> x,
                             std::span<const double> xi);

}  // namespace rollekit::kernels
