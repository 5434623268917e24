#include "rollekit/rolle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "rollekit/kernels.hpp"

namespace rollekit {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// f^(n+1)(xi) pi(x)/(n+1)! - (f(x) - P_n(x)); zero on the Rolle function.
double identity_g(const InterpolationProblem& prob, double pix, double delta, double xi) {
  return prob.f_np1.eval(xi) * pix / prob.factorial_np1 - delta;
}

double identity_gprime(const InterpolationProblem& prob, double pix, double xi) {
  return prob.f_np2.eval(xi) * pix / prob.factorial_np1;
}

struct RootHit {
  double xi;
  double residual;
};

// All roots of the identity in (x_0, x_n) at abscissa x: uniform grid scan
// for sign changes, bisection to 1e-6, then safeguarded Newton polish.
std::vector<RootHit> all_roots(const InterpolationProblem& prob, double x, int grid_count,
                               double seed_tol) {
  if (prob.degenerate) {
    throw DegenerateDerivativeError(
        "f^(n+1) is identically constant; the Rolle number is arbitrary");
  }
  const double x0 = prob.nodes.front();
  const double xn = prob.nodes.back();
  const double pix = prob.pi(x);
  if (std::abs(pix) <= 1e-13 * prob.pi_scale) {
    throw SingularNodeError("pi(x) vanishes at x = " + std::to_string(x) +
                            "; the identity places no constraint on xi there");
  }
  const double delta = error_at(prob, x);
  const double fscale = 1.0 + std::abs(prob.f.eval(x));

  auto g = [&](double xi) { return identity_g(prob, pix, delta, xi); };

  std::vector<RootHit> roots;
  const double h = (xn - x0) / grid_count;
  double prev_xi = x0;
  double prev_g = g(prev_xi);
  for (int j = 1; j <= grid_count; ++j) {
    const double cur_xi = (j == grid_count) ? xn : x0 + j * h;
    const double cur_g = g(cur_xi);
    const bool bracketed = (prev_g == 0.0) || (prev_g < 0.0) != (cur_g < 0.0);
    if (bracketed) {
      double lo = prev_xi, hi = cur_xi;
      double glo = prev_g;
      // bisection down to an interval of width 1e-6
      while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((glo < 0.0) == (gm < 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      // Newton polish, falling back to bisection when a step leaves [lo, hi]
      double xi = 0.5 * (lo + hi);
      double gxi = g(xi);
      for (int it = 0; it < 100 && std::abs(gxi) > seed_tol * fscale * 1e-3; ++it) {
        const double gp = identity_gprime(prob, pix, xi);
        double next = (gp != 0.0) ? xi - gxi / gp : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double gn = g(next);
        if ((glo < 0.0) == (gn < 0.0)) {
          lo = next;
          glo = gn;
        } else {
          hi = next;
        }
        if (next == xi) break;
        xi = next;
        gxi = gn;
      }
      const double residual = std::abs(gxi) / fscale;
      if (residual > seed_tol) {
        throw ConvergenceError("root polish stalled at normalized residual " +
                               std::to_string(residual));
      }
      if (xi > x0 && xi < xn) roots.push_back(RootHit{xi, residual});
    }
    prev_xi = cur_xi;
    prev_g = cur_g;
  }

  std::sort(roots.begin(), roots.end(),
            [](const RootHit& a, const RootHit& b) { return a.xi < b.xi; });
  std::vector<RootHit> unique;
  for (const RootHit& r : roots) {
    if (unique.empty() || r.xi - unique.back().xi > 1e-8) {
      unique.push_back(r);
    } else if (r.residual < unique.back().residual) {
      unique.back() = r;
    }
  }
  if (unique.empty()) {
    throw NoRootError("no Rolle number found in (x_0, x_n) at x = " + std::to_string(x));
  }
  return unique;
}

}  // namespace

InterpolationProblem make_problem(Expression f, NodeSet nodes) {
  const int n = nodes.n();
  Expression f_prime = f.derivative(1);
  Expression f_np1 = f.derivative(n + 1);
  Expression f_np2 = f_np1.derivative(1);
  Polynomial p_n = lagrange_interpolate(f, nodes);
  Polynomial p_n_prime = p_n.derivative();
  auto [pi, pi_prime] = node_polynomial(nodes);

  double pi_scale = 1.0;
  for (double x : kernels::linspace(nodes.front(), nodes.back(), 1001)) {
    pi_scale = std::max(pi_scale, std::abs(pi(x)));
  }
  const bool degenerate = f_np1.is_constant();

  return InterpolationProblem{std::move(f),
                              std::move(f_prime),
                              std::move(f_np1),
                              std::move(f_np2),
                              std::move(nodes),
                              std::move(p_n),
                              std::move(p_n_prime),
                              std::move(pi),
                              std::move(pi_prime),
                              n,
                              factorial(n + 1),
                              pi_scale,
                              degenerate};
}

double error_at(const InterpolationProblem& prob, double x) {
  return prob.f.eval(x) - prob.p_n(x);
}

double identity_residual(const InterpolationProblem& prob, double x, double xi) {
  const double g = identity_g(prob, prob.pi(x), error_at(prob, x), xi);
  return std::abs(g) / (1.0 + std::abs(prob.f.eval(x)));
}

std::vector<RolleSeed> seed_scan(const InterpolationProblem& prob, double x_z, int grid_count,
                                 double seed_tol) {
  if (grid_count < 100) throw Error("seed_scan grid_count must be >= 100");
  if (!(x_z > prob.nodes.front() && x_z < prob.nodes.back())) {
    throw Error("x_z must lie strictly inside (x_0, x_n)");
  }
  if (prob.nodes.is_node(x_z)) throw Error("x_z must not be an interpolation node");

  std::vector<RolleSeed> seeds;
  for (const RootHit& r : all_roots(prob, x_z, grid_count, seed_tol)) {
    seeds.push_back(RolleSeed{x_z, r.xi, r.residual});
  }
  return seeds;
}

double ode_rhs(const InterpolationProblem& prob, double x, double xi, double denom_floor) {
  const double pix = prob.pi(x);
  if (std::abs(pix) <= denom_floor * prob.pi_scale) {
    throw SingularNodeError("ode_rhs evaluated with pi(x) ~ 0 at x = " + std::to_string(x));
  }
  const double fnp2 = prob.f_np2.eval(xi);
  if (std::abs(fnp2) <= denom_floor) {
    throw SingularDerivativeError("f^(n+2)(xi) ~ 0 at xi = " + std::to_string(xi));
  }
  const double num = prob.factorial_np1 * (prob.f_prime.eval(x) - prob.p_n_prime(x)) -
                     prob.f_np1.eval(xi) * prob.pi_prime(x);
  return num / (pix * fnp2);
}

std::vector<double> pointwise_xi(const InterpolationProblem& prob, double x, int grid_count,
                                 double seed_tol) {
  std::vector<double> xs;
  for (const RootHit& r : all_roots(prob, x, grid_count, seed_tol)) xs.push_back(r.xi);
  return xs;
}

double pointwise_xi_near(const InterpolationProblem& prob, double x, double near,
                         int grid_count, double seed_tol) {
  const std::vector<double> roots = pointwise_xi(prob, x, grid_count, seed_tol);
  double best = roots.front();
  for (double r : roots) {
    if (std::abs(r - near) < std::abs(best - near)) best = r;
  }
  return best;
}

double RolleTrajectory::xi_at(double q) const {
  if (x.size() < 2) {
    if (x.size() == 1) return xi[0];
    throw InsufficientSamplesError("trajectory has no samples");
  }
  auto it = std::lower_bound(x.begin(), x.end(), q);
  std::size_t i1;
  if (it == x.begin()) {
    i1 = 1;
  } else if (it == x.end()) {
    i1 = x.size() - 1;
  } else {
    i1 = static_cast<std::size_t>(it - x.begin());
  }
  const std::size_t i0 = i1 - 1;
  const double w = (q - x[i0]) / (x[i1] - x[i0]);
  return xi[i0] + w * (xi[i1] - xi[i0]);
}

namespace {

class TrajectoryBuilder {
 public:
  TrajectoryBuilder(const InterpolationProblem& prob, const RolleSeed& seed, double step,
                    const SolveOptions& options)
      : prob_(prob), seed_(seed), step_(step), options_(options) {}

  RolleTrajectory build() {
    const double x0 = prob_.nodes.front();
    const double xn = prob_.nodes.back();
    const double delta_end = options_.delta_end.value_or(seed_.x_z - x0);
    if (delta_end < 0) throw Error("delta_end must be >= 0");
    const double left_limit = x0 + delta_end;
    const double right_limit = xn - delta_end;

    RolleTrajectory traj;
    traj.seed = seed_;
    traj.step = step_;
    traj.x0 = x0;
    traj.xn = xn;
    for (std::size_t k = 1; k + 1 < prob_.nodes.count(); ++k) {
      traj.guard_bands.push_back(GuardBand{prob_.nodes[k],
                                           prob_.nodes[k] - options_.delta_node,
                                           prob_.nodes[k] + options_.delta_node});
    }
    for (const GuardBand& band : traj.guard_bands) {
      if (seed_.x_z > band.lo && seed_.x_z < band.hi) {
        throw Error("x_z lies inside the guard band of node " + std::to_string(band.node));
      }
    }

    // rightward leg
    std::vector<double> rx{seed_.x_z}, rxi{seed_.xi_z};
    for (const GuardBand& band : traj.guard_bands) {
      if (band.lo <= seed_.x_z || band.node >= right_limit) continue;
      march(rx, rxi, band.lo, +1);
      cross_band(rx, rxi, band, +1, traj.rebridges);
    }
    if (right_limit > rx.back()) march(rx, rxi, right_limit, +1);

    // leftward leg
    std::vector<double> lx{seed_.x_z}, lxi{seed_.xi_z};
    for (auto it = traj.guard_bands.rbegin(); it != traj.guard_bands.rend(); ++it) {
      if (it->hi >= seed_.x_z || it->node <= left_limit) continue;
      march(lx, lxi, it->hi, -1);
      cross_band(lx, lxi, *it, -1, traj.rebridges);
    }
    if (left_limit < lx.back()) march(lx, lxi, left_limit, -1);

    traj.x.assign(lx.rbegin(), lx.rend() - 1);
    traj.xi.assign(lxi.rbegin(), lxi.rend() - 1);
    traj.x.insert(traj.x.end(), rx.begin(), rx.end());
    traj.xi.insert(traj.xi.end(), rxi.begin(), rxi.end());
    std::sort(traj.rebridges.begin(), traj.rebridges.end(),
              [](const RebridgeRecord& a, const RebridgeRecord& b) { return a.node < b.node; });
    return traj;
  }

 private:
  double rhs(double x, double xi) const {
    if (options_.rhs_override) return options_.rhs_override(x, xi);
    return ode_rhs(prob_, x, xi, options_.denom_floor);
  }

  double rk4(double x, double xi, double h) const {
    const double k1 = rhs(x, xi);
    const double k2 = rhs(x + 0.5 * h, xi + 0.5 * h * k1);
    const double k3 = rhs(x + 0.5 * h, xi + 0.5 * h * k2);
    const double k4 = rhs(x + h, xi + h * k3);
    return xi + h * (k1 + 2.0 * (k2 + k3) + k4) / 6.0;
  }

  double reanchor(double x, double near) const {
    const double root =
        pointwise_xi_near(prob_, x, near, options_.oracle_grid, options_.seed_tol);
    if (std::abs(root - near) > options_.branch_jump_tol) {
      throw BranchLossError("re-anchoring at x = " + std::to_string(x) + " jumped from xi = " +
                            std::to_string(near) + " to " + std::to_string(root));
    }
    return root;
  }

  void check_escape(double x, double xi) const {
    if (!(xi > prob_.nodes.front() && xi < prob_.nodes.back())) {
      throw EscapeError("xi = " + std::to_string(xi) + " left (x_0, x_n) at x = " +
                        std::to_string(x));
    }
  }

  // Advance one accepted grid point; falls back to oracle re-anchoring when
  // the ODE right-hand side hits an f^(n+2) zero mid-step.
  double advance(double x, double xi, double h, double x_next) const {
    double next;
    try {
      next = rk4(x, xi, h);
    } catch (const SingularDerivativeError&) {
      next = reanchor(x_next, xi);
    }
    if (options_.polish) {
      const double pix = prob_.pi(x_next);
      const double gp = identity_gprime(prob_, pix, next);
      if (std::abs(gp) > options_.denom_floor) {
        next -= identity_g(prob_, pix, error_at(prob_, x_next), next) / gp;
      }
    }
    check_escape(x_next, next);
    return next;
  }

  // Fixed-step march from the current leg tip to `target` (dir = +-1),
  // finishing with a shortened landing step onto the target itself.
  void march(std::vector<double>& xs, std::vector<double>& xis, double target, int dir) const {
    const double start = xs.back();
    const double span = dir > 0 ? target - start : start - target;
    if (span <= 0) return;
    const auto n_full = static_cast<long long>(std::floor(span / step_ + 1e-9));
    double x = start;
    double xi = xis.back();
    for (long long k = 1; k <= n_full; ++k) {
      const double x_next = start + dir * static_cast<double>(k) * step_;
      xi = advance(x, xi, dir * step_, x_next);
      x = x_next;
      xs.push_back(x);
      xis.push_back(xi);
    }
    const double rem = dir > 0 ? target - x : x - target;
    if (rem > step_ * 1e-9) {
      xi = advance(x, xi, dir * rem, target);
      xs.push_back(target);
      xis.push_back(xi);
    }
  }

  // Linear extrapolation across a node's guard band, re-anchored on the far
  // side by the pointwise oracle.
  void cross_band(std::vector<double>& xs, std::vector<double>& xis, const GuardBand& band,
                  int dir, std::vector<RebridgeRecord>& rebridges) const {
    const double x_here = xs.back();
    const double xi_here = xis.back();
    double slope = 0.0;
    if (xs.size() >= 2) {
      const std::size_t m = xs.size();
      slope = (xis[m - 1] - xis[m - 2]) / (xs[m - 1] - xs[m - 2]);
    }
    const double x_far = dir > 0 ? band.hi : band.lo;
    const double xi_extrap = xi_here + slope * (x_far - x_here);
    const double xi_far = reanchor(x_far, xi_extrap);
    check_escape(x_far, xi_far);
    if (dir > 0) {
      rebridges.push_back(RebridgeRecord{band.node, x_here, xi_here, x_far, xi_far});
    } else {
      rebridges.push_back(RebridgeRecord{band.node, x_far, xi_far, x_here, xi_here});
    }
    xs.push_back(x_far);
    xis.push_back(xi_far);
  }

  const InterpolationProblem& prob_;
  RolleSeed seed_;
  double step_;
  const SolveOptions& options_;
};

}  // namespace

RolleTrajectory solve_trajectory(const InterpolationProblem& prob, const RolleSeed& seed,
                                 double step, const SolveOptions& options) {
  if (!(step > 0)) throw Error("step must be > 0");
  if (prob.degenerate) {
    throw DegenerateDerivativeError(
        "f^(n+1) is identically constant; the Rolle ODE is degenerate");
  }
  if (!(seed.x_z > prob.nodes.front() && seed.x_z < prob.nodes.back())) {
    throw Error("seed abscissa must lie strictly inside (x_0, x_n)");
  }
  if (!(seed.xi_z > prob.nodes.front() && seed.xi_z < prob.nodes.back())) {
    throw EscapeError("seed xi outside (x_0, x_n)");
  }
  return TrajectoryBuilder(prob, seed, step, options).build();
}

double implied_rolle(const RolleTrajectory& traj, double node) {
  const GuardBand* band = nullptr;
  for (const GuardBand& b : traj.guard_bands) {
    if (std::abs(b.node - node) <= 1e-9 * (1.0 + std::abs(node))) band = &b;
  }
  const double reach =
      (band ? 0.5 * (band->hi - band->lo) : 0.0) + 10.0 * traj.step;

  auto it = std::lower_bound(traj.x.begin(), traj.x.end(), node);
  if (it == traj.x.begin() || it == traj.x.end()) {
    throw InsufficientSamplesError("no trajectory samples on both sides of node " +
                                   std::to_string(node));
  }
  const std::size_t ir = static_cast<std::size_t>(it - traj.x.begin());
  const std::size_t il = ir - 1;
  if (node - traj.x[il] > reach || traj.x[ir] - node > reach) {
    throw InsufficientSamplesError("nearest samples too far from node " + std::to_string(node));
  }
  const double w = (node - traj.x[il]) / (traj.x[ir] - traj.x[il]);
  return traj.xi[il] + w * (traj.xi[ir] - traj.xi[il]);
}

double endpoint_rolle(const RolleTrajectory& traj, Endpoint which) {
  if (traj.size() < 2) {
    throw InsufficientSamplesError("endpoint extrapolation needs at least two samples");
  }
  double x1, y1, x2, y2, target;
  if (which == Endpoint::left) {
    x1 = traj.x[0];
    y1 = traj.xi[0];
    x2 = traj.x[1];
    y2 = traj.xi[1];
    target = traj.x0;
  } else {
    const std::size_t m = traj.size();
    x1 = traj.x[m - 1];
    y1 = traj.xi[m - 1];
    x2 = traj.x[m - 2];
    y2 = traj.xi[m - 2];
    target = traj.xn;
  }
  return y1 + (y2 - y1) * (target - x1) / (x2 - x1);
}

ReconstructionTable reconstruct_error(const InterpolationProblem& prob,
                                      const RolleTrajectory& traj) {
  return kernels::reconstruct_table(prob, traj.x, traj.xi);
}

}  // namespace rollekit
