#pragma once

#include <vector>

#include "rollekit/poly.hpp"
#include "rollekit/rolle.hpp"

namespace rollekit {

// Result of replacing the Rolle term f^(n+1)(xi(x)) by a polynomial fit:
// corrected = P_n + p_xi * pi / (n+1)!, a single polynomial of degree
// <= n + 1 + fit_degree.
struct CorrectionResult {
  Polynomial p_xi;
  Polynomial corrected;
  int fit_degree = 0;
  std::size_t samples_used = 0;
  double max_err_before = 0;  // max |f - P_n| over the evaluation grid
  double max_err_after = 0;   // max |f - corrected|
  double improvement_factor = 0;
};

// (x, f^(n+1)(xi(x))) along the trajectory, decimated to at most 2000 evenly
// spaced samples.
std::vector<Sample> rolle_term_samples(const InterpolationProblem& prob,
                                       const RolleTrajectory& traj);

// Fits p_xi by least squares over rolle_term_samples and assembles the
// corrected polynomial; errors measured on a 10001-point uniform grid over
// [x_0, x_n]. On a degenerate problem the trajectory is ignored and the
// degree-0 path below is taken.
CorrectionResult build_correction(const InterpolationProblem& prob, const RolleTrajectory& traj,
                                  int fit_degree);

// Degenerate path: f^(n+1) is constant, p_xi is that constant and no
// trajectory is needed.
CorrectionResult build_correction(const InterpolationProblem& prob);

}  // namespace rollekit
