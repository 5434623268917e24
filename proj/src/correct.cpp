#include "rollekit/correct.hpp"

#include <cmath>
#include <limits>

#include "rollekit/kernels.hpp"

namespace rollekit {

namespace {

constexpr std::size_t kMaxFitSamples = 2000;
constexpr std::size_t kErrorGridPoints = 10001;

CorrectionResult assemble(const InterpolationProblem& prob, Polynomial p_xi, int fit_degree,
                          std::size_t samples_used) {
  CorrectionResult result;
  result.p_xi = std::move(p_xi);
  result.corrected = prob.p_n + (result.p_xi * prob.pi) / prob.factorial_np1;
  result.fit_degree = fit_degree;
  result.samples_used = samples_used;
  const kernels::ErrorGrid grid = kernels::error_grid(prob, result.corrected, kErrorGridPoints);
  result.max_err_before = grid.max_before;
  result.max_err_after = grid.max_after;
  result.improvement_factor = grid.max_after > 0.0
                                  ? grid.max_before / grid.max_after
                                  : std::numeric_limits<double>::infinity();
  return result;
}

}  // namespace

std::vector<Sample> rolle_term_samples(const InterpolationProblem& prob,
                                       const RolleTrajectory& traj) {
  const std::size_t m = traj.size();
  std::vector<double> xs, xis;
  if (m <= kMaxFitSamples) {
    xs = traj.x;
    xis = traj.xi;
  } else {
    xs.reserve(kMaxFitSamples);
    xis.reserve(kMaxFitSamples);
    for (std::size_t j = 0; j < kMaxFitSamples; ++j) {
      const std::size_t idx = j * (m - 1) / (kMaxFitSamples - 1);
      xs.push_back(traj.x[idx]);
      xis.push_back(traj.xi[idx]);
    }
  }
  const std::vector<double> ys = kernels::eval_expression(prob.f_np1, xis);
  std::vector<Sample> samples(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) samples[i] = Sample{xs[i], ys[i]};
  return samples;
}

CorrectionResult build_correction(const InterpolationProblem& prob, const RolleTrajectory& traj,
                                  int fit_degree) {
  if (prob.degenerate) return build_correction(prob);
  if (fit_degree < 0) throw Error("fit degree must be >= 0");
  const std::vector<Sample> samples = rolle_term_samples(prob, traj);
  Polynomial p_xi = least_squares_fit(samples, fit_degree);
  return assemble(prob, std::move(p_xi), fit_degree, samples.size());
}

CorrectionResult build_correction(const InterpolationProblem& prob) {
  if (!prob.degenerate) {
    throw Error("degenerate correction path requires a constant f^(n+1)");
  }
  const double mid = 0.5 * (prob.nodes.front() + prob.nodes.back());
  Polynomial p_xi = Polynomial::constant(prob.f_np1.eval(mid));
  return assemble(prob, std::move(p_xi), 0, 0);
}

}  // namespace rollekit
