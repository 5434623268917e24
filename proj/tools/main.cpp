#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rollekit/correct.hpp"
#include "rollekit/io.hpp"
#include "rollekit/kernels.hpp"
#include "rollekit/rolle.hpp"
#include "rollekit/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rollekit;

namespace {

struct ConfigError : Error {
  using Error::Error;
};

struct RunConfig {
  std::string function_text;
  std::string nodes_text;       // decimal literals, comma separated
  std::string nodes_expr_text;  // expressions, e.g. "0,2,3*pi/2"
  double x_z = 1e-5;
  double step = 5e-5;
  int fit_degree = 6;
  std::string branch = "all";
  bool polish = false;
  std::string output_dir = "out";
  bool emit_plots = false;
};

void emit_error_json(const std::string& kind, const std::string& message,
                     json extra = json::object()) {
  extra["error"] = kind;
  extra["message"] = message;
  std::cerr << extra.dump() << std::endl;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

std::vector<double> parse_nodes(const RunConfig& cfg) {
  if (cfg.nodes_text.empty() == cfg.nodes_expr_text.empty()) {
    throw ConfigError("exactly one of --nodes / --nodes-expr is required");
  }
  std::vector<double> nodes;
  if (!cfg.nodes_text.empty()) {
    for (const std::string& part : split(cfg.nodes_text, ',')) {
      try {
        std::size_t used = 0;
        const double v = std::stod(part, &used);
        if (used != part.size()) throw std::invalid_argument(part);
        nodes.push_back(v);
      } catch (const std::exception&) {
        throw ConfigError("invalid node literal '" + part + "'");
      }
    }
  } else {
    for (const std::string& part : split(cfg.nodes_expr_text, ',')) {
      try {
        const Expression e = Expression::parse(part);
        if (!e.is_constant()) {
          throw ConfigError("node expression '" + part + "' must not contain x");
        }
        nodes.push_back(e.eval(0.0));
      } catch (const ParseError& pe) {
        throw ConfigError("invalid node expression '" + part + "': " + pe.what());
      }
    }
  }
  return nodes;
}

struct Pipeline {
  InterpolationProblem prob;
  io::RunParams params;
};

Pipeline build_pipeline(const RunConfig& cfg) {
  std::optional<Expression> f;
  try {
    f = Expression::parse(cfg.function_text);
  } catch (const ParseError& pe) {
    throw ConfigError(std::string("invalid --function: ") + pe.what());
  }
  const std::vector<double> node_values = parse_nodes(cfg);
  if (node_values.size() < 2) throw ConfigError("need at least two nodes");

  std::optional<NodeSet> nodes;
  try {
    nodes.emplace(node_values);
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid nodes: ") + e.what());
  }
  if (!(cfg.x_z > nodes->front() && cfg.x_z < nodes->back())) {
    throw ConfigError("--xz must lie strictly inside the node span");
  }
  if (nodes->is_node(cfg.x_z)) throw ConfigError("--xz must not be an interpolation node");
  if (!(cfg.step > 0)) throw ConfigError("--step must be > 0");
  if (cfg.fit_degree < 0) throw ConfigError("--fit-degree must be >= 0");
  if (cfg.branch != "all") {
    try {
      if (std::stoi(cfg.branch) < 1) throw std::invalid_argument(cfg.branch);
    } catch (const std::exception&) {
      throw ConfigError("--branch must be 'all' or a positive integer");
    }
  }

  io::RunParams params;
  params.function_text = cfg.function_text;
  params.nodes = node_values;
  params.x_z = cfg.x_z;
  params.step = cfg.step;
  params.polish = cfg.polish;
  params.fit_degree = cfg.fit_degree;
  params.branch = cfg.branch;
  return Pipeline{make_problem(*std::move(f), *std::move(nodes)), std::move(params)};
}

fs::path resolve_output_dir(const RunConfig& cfg) {
  const char* env = std::getenv("ROLLEKIT_OUT");
  fs::path dir = (env && *env) ? fs::path(env) : fs::path(cfg.output_dir);
  fs::create_directories(dir);
  return dir;
}

json degenerate_report(const InterpolationProblem& prob) {
  const double c = prob.f_np1.eval(0.5 * (prob.nodes.front() + prob.nodes.back()));
  const Polynomial delta = prob.pi * (c / prob.factorial_np1);
  return json{{"f_np1_constant", c},
              {"factorial_np1", prob.factorial_np1},
              {"pi_coeffs", prob.pi.coeffs()},
              {"delta_formula", "delta(x) = f_np1_constant / factorial_np1 * pi(x)"},
              {"delta_coeffs", delta.coeffs()}};
}

std::vector<int> select_branches(const std::string& branch, std::size_t seed_count) {
  std::vector<int> out;
  if (branch == "all") {
    for (std::size_t i = 1; i <= seed_count; ++i) out.push_back(static_cast<int>(i));
  } else {
    const int b = std::stoi(branch);
    if (b < 1 || static_cast<std::size_t>(b) > seed_count) {
      throw Error("branch " + branch + " does not exist; found " +
                  std::to_string(seed_count) + " seed(s)");
    }
    out.push_back(b);
  }
  return out;
}

struct SolvedBranch {
  int index;
  RolleTrajectory traj;
  ReconstructionTable table;
};

// Branches are independent; solve them concurrently.
std::vector<SolvedBranch> solve_branches(const InterpolationProblem& prob,
                                         const std::vector<RolleSeed>& seeds,
                                         const std::vector<int>& indices, double step,
                                         bool polish) {
  std::vector<SolvedBranch> out(indices.size());
  std::exception_ptr first_error;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(indices.size()); ++i) {
    try {
      SolveOptions opts;
      opts.polish = polish;
      const RolleSeed& seed = seeds[static_cast<std::size_t>(indices[i] - 1)];
      RolleTrajectory traj = solve_trajectory(prob, seed, step, opts);
      ReconstructionTable table = reconstruct_error(prob, traj);
      out[i] = SolvedBranch{indices[i], std::move(traj), std::move(table)};
    } catch (...) {
#pragma omp critical
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

void write_branch_artifacts(const fs::path& dir, const SolvedBranch& b, bool emit_plots) {
  const std::string tag = "branch" + std::to_string(b.index);
  io::write_trajectory_csv(dir / (tag + "_trajectory.csv"), b.traj, b.table);
  io::write_reconstruction_csv(dir / (tag + "_reconstruction.csv"), b.table);
  if (emit_plots) {
    svg::PlotOptions xi_opts;
    xi_opts.title = "Rolle function, " + tag;
    xi_opts.y_label = "xi(x)";
    svg::write_line_svg(dir / (tag + "_xi.svg"), b.traj.x, b.traj.xi, xi_opts);

    std::vector<double> diffs(b.table.rows.size());
    for (std::size_t i = 0; i < diffs.size(); ++i) diffs[i] = b.table.rows[i].abs_diff;
    svg::PlotOptions diff_opts;
    diff_opts.title = "|reconstructed - true| error, " + tag;
    diff_opts.y_label = "abs diff (log10)";
    diff_opts.log_y = true;
    svg::write_line_svg(dir / (tag + "_abs_diff.svg"), b.traj.x, diffs, diff_opts);
  }
}

int cmd_solve(const RunConfig& cfg) {
  Pipeline p = build_pipeline(cfg);
  const fs::path dir = resolve_output_dir(cfg);
  if (p.prob.degenerate) {
    emit_error_json("degenerate_constant_derivative",
                    "f^(n+1) is constant: the pointwise error is exactly "
                    "f_np1_constant/factorial_np1 * pi(x) and xi is arbitrary",
                    degenerate_report(p.prob));
    return 3;
  }
  const std::vector<RolleSeed> seeds = seed_scan(p.prob, cfg.x_z);
  const std::vector<int> indices = select_branches(cfg.branch, seeds.size());
  const std::vector<SolvedBranch> branches =
      solve_branches(p.prob, seeds, indices, cfg.step, cfg.polish);

  std::vector<io::BranchReport> reports;
  for (const SolvedBranch& b : branches) {
    write_branch_artifacts(dir, b, cfg.emit_plots);
    reports.push_back(io::BranchReport{b.index, &b.traj, &b.table});
  }
  io::write_json(dir / "summary.json", io::solve_summary(p.prob, p.params, seeds, reports));
  std::printf("wrote %s (%zu branch(es), %zu seed(s))\n",
              (dir / "summary.json").string().c_str(), branches.size(), seeds.size());
  return 0;
}

int cmd_correct(const RunConfig& cfg) {
  Pipeline p = build_pipeline(cfg);
  const fs::path dir = resolve_output_dir(cfg);

  CorrectionResult corr;
  int branch_index = 0;
  if (p.prob.degenerate) {
    corr = build_correction(p.prob);
  } else {
    const std::vector<RolleSeed> seeds = seed_scan(p.prob, cfg.x_z);
    branch_index = (cfg.branch == "all") ? 1 : std::stoi(cfg.branch);
    const std::vector<int> indices = select_branches(std::to_string(branch_index), seeds.size());
    const std::vector<SolvedBranch> branches =
        solve_branches(p.prob, seeds, indices, cfg.step, cfg.polish);
    const SolvedBranch& b = branches.front();
    write_branch_artifacts(dir, b, cfg.emit_plots);
    std::vector<io::BranchReport> reports{io::BranchReport{b.index, &b.traj, &b.table}};
    io::write_json(dir / "summary.json", io::solve_summary(p.prob, p.params, seeds, reports));
    corr = build_correction(p.prob, b.traj, cfg.fit_degree);
  }

  const std::string tag = "correction_branch" + std::to_string(branch_index);
  io::write_json(dir / (tag + ".json"),
                 io::correction_report(p.prob, p.params, corr, branch_index));
  const kernels::ErrorGrid grid = kernels::error_grid(p.prob, corr.corrected, 10001);
  io::write_error_csv(dir / (tag + "_errors.csv"), grid);
  if (cfg.emit_plots) {
    svg::PlotOptions before_opts;
    before_opts.title = "|f - P_n|";
    before_opts.y_label = "error (log10)";
    before_opts.log_y = true;
    svg::write_line_svg(dir / (tag + "_before.svg"), grid.x, grid.err_before, before_opts);
    svg::PlotOptions after_opts;
    after_opts.title = "|f - corrected|";
    after_opts.y_label = "error (log10)";
    after_opts.log_y = true;
    svg::write_line_svg(dir / (tag + "_after.svg"), grid.x, grid.err_after, after_opts);
  }
  std::printf("wrote %s: max_err_before=%.6g max_err_after=%.6g\n",
              (dir / (tag + ".json")).string().c_str(), corr.max_err_before,
              corr.max_err_after);
  return 0;
}

// ---------------------------------------------------------------------------
// reproduce: canonical runs with built-in checks
// ---------------------------------------------------------------------------

struct CheckList {
  bool all_ok = true;

  void expect(const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %s (%s)\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    all_ok = all_ok && ok;
  }

  void expect_near(const std::string& name, double got, double want, double tol) {
    char detail[128];
    std::snprintf(detail, sizeof(detail), "got %.6g, expected %.6g +- %g", got, want, tol);
    expect(name, std::abs(got - want) <= tol, detail);
  }

  void expect_le(const std::string& name, double got, double bound) {
    char detail[128];
    std::snprintf(detail, sizeof(detail), "got %.3g, bound %.3g", got, bound);
    expect(name, got <= bound, detail);
  }
};

constexpr double kPi = 3.14159265358979323846;

InterpolationProblem example_problem(bool three_nodes) {
  std::vector<double> nodes{0.0, 1.5 * kPi};
  if (three_nodes) nodes = {0.0, 2.0, 1.5 * kPi};
  return make_problem(Expression::parse("exp(x)*sin(x)"), NodeSet(nodes));
}

void reproduce_example1(CheckList& checks) {
  const InterpolationProblem prob = example_problem(false);
  const std::vector<RolleSeed> seeds = seed_scan(prob, 1e-5);
  checks.expect("example1: two seeds", seeds.size() == 2,
                std::to_string(seeds.size()) + " found");
  if (seeds.size() != 2) return;
  checks.expect_near("example1: seed 1", seeds[0].xi_z, 2.1931, 1e-3);
  checks.expect_near("example1: seed 2", seeds[1].xi_z, 4.6631, 1e-3);
  for (int b : {0, 1}) {
    const RolleTrajectory traj = solve_trajectory(prob, seeds[b], 5e-5);
    const ReconstructionTable table = reconstruct_error(prob, traj);
    checks.expect_le("example1: branch " + std::to_string(b + 1) + " max |diff in delta|",
                     table.max_abs_diff, 1e-9);
  }
}

void reproduce_example2(CheckList& checks) {
  const InterpolationProblem prob = example_problem(true);
  const auto& c = prob.p_n.coeffs();
  checks.expect_near("example2: coefficient a", c.size() > 2 ? c[2] : 0.0, -9.9476, 1e-3);
  checks.expect_near("example2: coefficient b", c.size() > 1 ? c[1] : 0.0, 23.2546, 1e-3);
  checks.expect_near("example2: coefficient c", c[0], 0.0, 1e-3);

  const std::vector<RolleSeed> seeds = seed_scan(prob, 1e-5);
  checks.expect("example2: two seeds", seeds.size() == 2,
                std::to_string(seeds.size()) + " found");
  if (seeds.size() != 2) return;
  checks.expect_near("example2: seed 1", seeds[0].xi_z, 1.7845, 1e-3);
  checks.expect_near("example2: seed 2", seeds[1].xi_z, 3.8165, 1e-3);

  const RolleTrajectory traj1 = solve_trajectory(prob, seeds[0], 5e-5);
  const RolleTrajectory traj2 = solve_trajectory(prob, seeds[1], 5e-5);
  checks.expect_le("example2: branch 2 max |diff in delta|",
                   reconstruct_error(prob, traj2).max_abs_diff, 1e-9);
  checks.expect_near("example2: implied xi(2), branch 1", implied_rolle(traj1, 2.0), 2.0991,
                     5e-3);
  checks.expect_near("example2: implied xi(2), branch 2", implied_rolle(traj2, 2.0), 3.7381,
                     5e-3);
}

void reproduce_application(CheckList& checks) {
  const InterpolationProblem prob = example_problem(false);
  const std::vector<RolleSeed> seeds = seed_scan(prob, 1e-5);
  const RolleTrajectory traj = solve_trajectory(prob, seeds.front(), 5e-5);
  const CorrectionResult corr = build_correction(prob, traj, 6);
  checks.expect_near("application: max |f - P_1|", corr.max_err_before, 75.0, 2.0);
  checks.expect_le("application: max |f - corrected|", corr.max_err_after, 1e-2);
  checks.expect("application: improvement factor >= 5000",
                corr.improvement_factor >= 5e3,
                "got " + std::to_string(corr.improvement_factor));
}

int cmd_reproduce(const std::string& which) {
  CheckList checks;
  if (which == "example1") {
    reproduce_example1(checks);
  } else if (which == "example2") {
    reproduce_example2(checks);
  } else if (which == "application") {
    reproduce_application(checks);
  } else {
    throw ConfigError("unknown reproduction target '" + which + "'");
  }
  std::printf("%s: %s\n", which.c_str(), checks.all_ok ? "all checks passed" : "CHECKS FAILED");
  return checks.all_ok ? 0 : 1;
}

void add_common_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--function", cfg.function_text, "expression in x, e.g. \"exp(x)*sin(x)\"")
      ->required();
  cmd->add_option("--nodes", cfg.nodes_text, "comma-separated node values");
  cmd->add_option("--nodes-expr", cfg.nodes_expr_text,
                  "comma-separated node expressions, e.g. \"0,3*pi/2\"");
  cmd->add_option("--xz", cfg.x_z, "seed abscissa (default 1e-5)");
  cmd->add_option("--step", cfg.step, "RK4 step size (default 5e-5)");
  cmd->add_option("--branch", cfg.branch, "branch index (1-based) or 'all'");
  cmd->add_flag("--polish", cfg.polish, "Newton-project each accepted step onto the identity");
  cmd->add_option("--output-dir,-o", cfg.output_dir,
                  "artifact directory (ROLLEKIT_OUT overrides)");
  cmd->add_flag("--emit-plots", cfg.emit_plots, "write SVG line plots");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rolle function recovery for Lagrange interpolation"};
  app.require_subcommand(1);

  RunConfig cfg;
  CLI::App* solve = app.add_subcommand("solve", "recover xi(x) branches and emit artifacts");
  add_common_options(solve, cfg);

  RunConfig corr_cfg;
  CLI::App* correct =
      app.add_subcommand("correct", "solve, then fit the Rolle term and emit the corrected "
                                    "polynomial");
  add_common_options(correct, corr_cfg);
  correct->add_option("--fit-degree", corr_cfg.fit_degree, "degree of the Rolle-term fit");

  std::string which;
  CLI::App* reproduce =
      app.add_subcommand("reproduce", "run a canonical configuration with built-in checks");
  reproduce->add_option("target", which, "example1 | example2 | application")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    emit_error_json("config", e.what());
    return 2;
  }

  try {
    if (solve->parsed()) return cmd_solve(cfg);
    if (correct->parsed()) return cmd_correct(corr_cfg);
    return cmd_reproduce(which);
  } catch (const ConfigError& e) {
    emit_error_json("config", e.what());
    return 2;
  } catch (const DegenerateDerivativeError& e) {
    emit_error_json("degenerate_constant_derivative", e.what());
    return 3;
  } catch (const NoRootError& e) {
    emit_error_json("no_seeds", e.what());
    return 3;
  } catch (const BranchLossError& e) {
    emit_error_json("branch_loss", e.what());
    return 3;
  } catch (const EscapeError& e) {
    emit_error_json("escape", e.what());
    return 3;
  } catch (const Error& e) {
    emit_error_json("numerical", e.what());
    return 3;
  } catch (const std::exception& e) {
    emit_error_json("internal", e.what());
    return 3;
  }
}
