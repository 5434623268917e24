#include "rollekit/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>

namespace rollekit::kernels {

namespace {

using index_t = std::ptrdiff_t;

double reconstruct_diff(const InterpolationProblem& prob, double x, double xi,
                        ReconstructionRow& row) {
  const double rec = prob.f_np1.eval(xi) * prob.pi(x) / prob.factorial_np1;
  const double tru = prob.f.eval(x) - prob.p_n(x);
  row = ReconstructionRow{x, rec, tru, std::abs(rec - tru)};
  return row.abs_diff;
}

}  // namespace

std::vector<double> linspace(double a, double b, std::size_t count) {
  std::vector<double> xs(count);
  if (count == 1) {
    xs[0] = a;
    return xs;
  }
  for (std::size_t i = 0; i < count; ++i) {
    xs[i] = a + (b - a) * (static_cast<double>(i) / static_cast<double>(count - 1));
  }
  if (count > 1) xs.back() = b;
  return xs;
}

void eval_expression_serial(const Expression& e, std::span<const double> xs,
                            std::span<double> out) {
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = e.eval(xs[i]);
}

void eval_expression(const Expression& e, std::span<const double> xs, std::span<double> out) {
  std::atomic<bool> failed{false};
  const index_t m = static_cast<index_t>(xs.size());
#pragma omp parallel for schedule(static)
  for (index_t i = 0; i < m; ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      out[i] = e.eval(xs[i]);
    } catch (...) {
      failed.store(true, std::memory_order_relaxed);
    }
  }
  // Rerun serially so the original exception propagates with its message.
  if (failed.load()) eval_expression_serial(e, xs, out);
}

std::vector<double> eval_expression(const Expression& e, std::span<const double> xs) {
  std::vector<double> out(xs.size());
  eval_expression(e, xs, out);
  return out;
}

ReconstructionTable reconstruct_table_serial(const InterpolationProblem& prob,
                                             std::span<const double> x,
                                             std::span<const double> xi) {
  ReconstructionTable table;
  table.rows.resize(x.size());
  double mx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx = std::max(mx, reconstruct_diff(prob, x[i], xi[i], table.rows[i]));
  }
  table.max_abs_diff = mx;
  return table;
}

ReconstructionTable reconstruct_table(const InterpolationProblem& prob,
                                      std::span<const double> x, std::span<const double> xi) {
  ReconstructionTable table;
  table.rows.resize(x.size());
  std::atomic<bool> failed{false};
  double mx = 0.0;
  const index_t m = static_cast<index_t>(x.size());
#pragma omp parallel for schedule(static) reduction(max : mx)
  for (index_t i = 0; i < m; ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      mx = std::max(mx, reconstruct_diff(prob, x[i], xi[i], table.rows[i]));
    } catch (...) {
      failed.store(true, std::memory_order_relaxed);
    }
  }
  if (failed.load()) return reconstruct_table_serial(prob, x, xi);
  table.max_abs_diff = mx;
  return table;
}

ErrorGrid error_grid_serial(const InterpolationProblem& prob, const Polynomial& corrected,
                            std::size_t points) {
  ErrorGrid grid;
  grid.x = linspace(prob.nodes.front(), prob.nodes.back(), points);
  grid.err_before.resize(points);
  grid.err_after.resize(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double fx = prob.f.eval(grid.x[i]);
    grid.err_before[i] = std::abs(fx - prob.p_n(grid.x[i]));
    grid.err_after[i] = std::abs(fx - corrected(grid.x[i]));
    grid.max_before = std::max(grid.max_before, grid.err_before[i]);
    grid.max_after = std::max(grid.max_after, grid.err_after[i]);
  }
  return grid;
}

ErrorGrid error_grid(const InterpolationProblem& prob, const Polynomial& corrected,
                     std::size_t points) {
  ErrorGrid grid;
  grid.x = linspace(prob.nodes.front(), prob.nodes.back(), points);
  grid.err_before.resize(points);
  grid.err_after.resize(points);
  std::atomic<bool> failed{false};
  double mb = 0.0, ma = 0.0;
  const index_t m = static_cast<index_t>(points);
#pragma omp parallel for schedule(static) reduction(max : mb, ma)
  for (index_t i = 0; i < m; ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      const double fx = prob.f.eval(grid.x[i]);
      grid.err_before[i] = std::abs(fx - prob.p_n(grid.x[i]));
      grid.err_after[i] = std::abs(fx - corrected(grid.x[i]));
      mb = std::max(mb, grid.err_before[i]);
      ma = std::max(ma, grid.err_after[i]);
    } catch (...) {
      failed.store(true, std::memory_order_relaxed);
    }
  }
  if (failed.load()) return error_grid_serial(prob, corrected, points);
  grid.max_before = mb;
  grid.max_after = ma;
  return grid;
}

double max_identity_residual_serial(const InterpolationProblem& prob,
                                    std::span<const double> x, std::span<const double> xi) {
  double mx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx = std::max(mx, identity_residual(prob, x[i], xi[i]));
  }
  return mx;
}

double max_identity_residual(const InterpolationProblem& prob, std::span<const double> x,
                             std::span<const double> xi) {
  std::atomic<bool> failed{false};
  double mx = 0.0;
  const index_t m = static_cast<index_t>(x.size());
#pragma omp parallel for schedule(static) reduction(max : mx)
  for (index_t i = 0; i < m; ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      mx = std::max(mx, identity_residual(prob, x[i], xi[i]));
    } catch (...) {
      failed.store(true, std::memory_order_relaxed);
    }
  }
  if (failed.load()) return max_identity_residual_serial(prob, x, xi);
  return mx;
}

}  // namespace rollekit::kernels
