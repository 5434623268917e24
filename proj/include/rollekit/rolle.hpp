#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "rollekit/expr.hpp"
#include "rollekit/poly.hpp"

namespace rollekit {

// Everything fixed by the choice of f and the nodes: the interpolant, the
// node polynomial, and the derivatives of f the defining identity and its
// ODE need. Immutable and shareable across threads once built.
struct InterpolationProblem {
  Expression f;
  Expression f_prime;
  Expression f_np1;  // (n+1)-th derivative
  Expression f_np2;  // (n+2)-th derivative
  NodeSet nodes;
  Polynomial p_n;
  Polynomial p_n_prime;
  Polynomial pi;
  Polynomial pi_prime;
  int n = 0;                 // interpolant degree = node count - 1
  double factorial_np1 = 1;  // (n+1)!
  double pi_scale = 1;       // max(1, max |pi| over [x_0, x_n])
  bool degenerate = false;   // f_np1 is symbolically constant
};

InterpolationProblem make_problem(Expression f, NodeSet nodes);

// f(x) - P_n(x).
double error_at(const InterpolationProblem& prob, double x);

// Initial condition (x_z, xi_z) with the accepted normalized identity
// residual.
struct RolleSeed {
  double x_z;
  double xi_z;
  double residual;
};

// Residual of the defining identity at (x, xi), normalized by
// (n+1)!*(1 + |f(x)|).
double identity_residual(const InterpolationProblem& prob, double x, double xi);

// All roots xi in (x_0, x_n) of
//   f^(n+1)(xi)*pi(x_z)/(n+1)! = f(x_z) - P_n(x_z)
// via uniform-grid bracketing, bisection, and Newton polish. Sorted by xi.
std::vector<RolleSeed> seed_scan(const InterpolationProblem& prob, double x_z,
                                 int grid_count = 2000, double seed_tol = 1e-12);

// The defining ODE:
//   dxi/dx = [(n+1)!(f'(x) - P_n'(x)) - f^(n+1)(xi) pi'(x)] / [pi(x) f^(n+2)(xi)]
// Throws SingularNodeError / SingularDerivativeError near either zero
// denominator factor.
double ode_rhs(const InterpolationProblem& prob, double x, double xi,
               double denom_floor = 1e-13);

// Independent pointwise oracle: all xi in (x_0, x_n) satisfying the identity
// at this x, by dense-grid bracketing + bisection + Newton polish.
std::vector<double> pointwise_xi(const InterpolationProblem& prob, double x,
                                 int grid_count = 2000, double seed_tol = 1e-12);
// The single root closest to `near`.
double pointwise_xi_near(const InterpolationProblem& prob, double x, double near,
                         int grid_count = 2000, double seed_tol = 1e-12);

struct GuardBand {
  double node;
  double lo;
  double hi;
};

// Samples used to re-anchor the trajectory across an interior node.
struct RebridgeRecord {
  double node;
  double x_left;
  double xi_left;
  double x_right;
  double xi_right;
};

struct SolveOptions {
  double delta_node = 1e-3;          // guard-band half-width at interior nodes
  std::optional<double> delta_end;   // endpoint margin; default x_z - x_0
  bool polish = false;               // per-step Newton projection onto the identity
  double branch_jump_tol = 0.5;      // max |re-anchored xi - extrapolated xi|
  double denom_floor = 1e-13;
  int oracle_grid = 2000;            // grid for re-anchoring root solves
  double seed_tol = 1e-12;
  // Test seam: replaces ode_rhs when set.
  std::function<double(double, double)> rhs_override;
};

// One branch of the Rolle function: ordered (x, xi) samples over
// [x_0 + delta_end, x_n - delta_end] minus the interior guard bands.
struct RolleTrajectory {
  RolleSeed seed;
  std::vector<double> x;
  std::vector<double> xi;
  double step = 0;
  double x0 = 0;  // interval endpoints of the problem
  double xn = 0;
  std::vector<GuardBand> guard_bands;
  std::vector<RebridgeRecord> rebridges;

  std::size_t size() const { return x.size(); }
  // Linear interpolation between the neighboring samples of query point q.
  double xi_at(double q) const;
};

// Classical fixed-step RK4 on the defining ODE, integrated from the seed
// outward in both directions. No evaluation abscissa (including half steps)
// falls inside a guard band; at interior nodes xi is linearly extrapolated
// across the band and re-anchored with the pointwise oracle.
RolleTrajectory solve_trajectory(const InterpolationProblem& prob, const RolleSeed& seed,
                                 double step = 5e-5, const SolveOptions& options = {});

// Rolle number implied at an interior node by continuity: linear
// interpolation of the nearest samples on either side.
double implied_rolle(const RolleTrajectory& traj, double node);

enum class Endpoint { left, right };

// Linear extrapolation of the two samples nearest an endpoint.
double endpoint_rolle(const RolleTrajectory& traj, Endpoint which);

struct ReconstructionRow {
  double x;
  double delta_reconstructed;  // f^(n+1)(xi) pi(x) / (n+1)!
  double delta_true;           // f(x) - P_n(x)
  double abs_diff;
};

struct ReconstructionTable {
  std::vector<ReconstructionRow> rows;
  double max_abs_diff = 0;
};

// Reconstructed vs. true pointwise error at every trajectory sample.
ReconstructionTable reconstruct_error(const InterpolationProblem& prob,
                                      const RolleTrajectory& traj);

}  // namespace rollekit
