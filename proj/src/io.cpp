#include "rollekit/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rollekit::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

nlohmann::json coeffs_json(const Polynomial& p) { return nlohmann::json(p.coeffs()); }

// JSON has no infinity; exact-zero corrected error reports a null factor.
nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trajectory_csv(const std::filesystem::path& path, const RolleTrajectory& traj,
                          const ReconstructionTable& table) {
  if (table.rows.size() != traj.size()) {
    throw Error("reconstruction table does not match trajectory sample count");
  }
  std::ofstream out = open_out(path);
  out << "x,xi,delta_reconstructed,delta_true,abs_diff\n";
  std::size_t band = 0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    while (band < traj.guard_bands.size() && traj.x[i] >= traj.guard_bands[band].hi) {
      const GuardBand& b = traj.guard_bands[band];
      out << "# guard node=" << fmt17(b.node) << " [" << fmt17(b.lo) << "," << fmt17(b.hi)
          << "]\n";
      ++band;
    }
    const ReconstructionRow& r = table.rows[i];
    out << fmt17(traj.x[i]) << ',' << fmt17(traj.xi[i]) << ',' << fmt17(r.delta_reconstructed)
        << ',' << fmt17(r.delta_true) << ',' << fmt17(r.abs_diff) << '\n';
  }
}

void write_reconstruction_csv(const std::filesystem::path& path,
                              const ReconstructionTable& table) {
  std::ofstream out = open_out(path);
  out << "x,delta_reconstructed,delta_true,abs_diff\n";
  for (const ReconstructionRow& r : table.rows) {
    out << fmt17(r.x) << ',' << fmt17(r.delta_reconstructed) << ',' << fmt17(r.delta_true)
        << ',' << fmt17(r.abs_diff) << '\n';
  }
}

void write_error_csv(const std::filesystem::path& path, const kernels::ErrorGrid& grid) {
  std::ofstream out = open_out(path);
  out << "x,err_before,err_after\n";
  for (std::size_t i = 0; i < grid.x.size(); ++i) {
    out << fmt17(grid.x[i]) << ',' << fmt17(grid.err_before[i]) << ','
        << fmt17(grid.err_after[i]) << '\n';
  }
}

CsvData read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  CsvData data;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      data.comments.push_back(line);
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    if (first) {
      while (std::getline(ss, cell, ',')) data.header.push_back(cell);
      first = false;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    data.rows.push_back(std::move(row));
  }
  return data;
}

nlohmann::json solve_summary(const InterpolationProblem& prob, const RunParams& params,
                             const std::vector<RolleSeed>& seeds,
                             const std::vector<BranchReport>& branches) {
  nlohmann::json j;
  j["schema"] = "rollekit-solve-summary/1";
  j["function"] = params.function_text;
  j["nodes"] = prob.nodes.values();
  j["degree"] = prob.n;
  j["x_z"] = params.x_z;
  j["step"] = params.step;
  j["polish"] = params.polish;
  j["interpolant_coeffs"] = coeffs_json(prob.p_n);
  j["pi_coeffs"] = coeffs_json(prob.pi);
  j["degenerate"] = prob.degenerate;

  nlohmann::json seeds_json = nlohmann::json::array();
  for (const RolleSeed& s : seeds) {
    seeds_json.push_back({{"x_z", s.x_z}, {"xi_z", s.xi_z}, {"residual", s.residual}});
  }
  j["seeds"] = seeds_json;

  nlohmann::json branch_array = nlohmann::json::array();
  for (const BranchReport& br : branches) {
    const RolleTrajectory& traj = *br.traj;
    nlohmann::json b;
    b["branch"] = br.index;
    b["seed_xi"] = traj.seed.xi_z;
    b["samples"] = traj.size();
    b["max_reconstruction_diff"] = br.table->max_abs_diff;
    b["max_identity_residual"] = kernels::max_identity_residual(prob, traj.x, traj.xi);

    nlohmann::json implied = nlohmann::json::array();
    for (const GuardBand& band : traj.guard_bands) {
      implied.push_back({{"node", band.node}, {"xi", implied_rolle(traj, band.node)}});
    }
    b["implied_rolle"] = implied;
    b["endpoint_left"] = endpoint_rolle(traj, Endpoint::left);
    b["endpoint_right"] = endpoint_rolle(traj, Endpoint::right);

    nlohmann::json bands = nlohmann::json::array();
    for (const GuardBand& band : traj.guard_bands) {
      bands.push_back({{"node", band.node}, {"lo", band.lo}, {"hi", band.hi}});
    }
    b["guard_bands"] = bands;
    branch_array.push_back(std::move(b));
  }
  j["branches"] = branch_array;
  return j;
}

nlohmann::json correction_report(const InterpolationProblem& prob, const RunParams& params,
                                 const CorrectionResult& result, int branch) {
  nlohmann::json j;
  j["schema"] = "rollekit-correction/1";
  j["function"] = params.function_text;
  j["nodes"] = prob.nodes.values();
  j["degree"] = prob.n;
  j["branch"] = branch;
  j["degenerate"] = prob.degenerate;
  j["fit_degree"] = result.fit_degree;
  j["samples_used"] = result.samples_used;
  j["p_xi_coeffs"] = coeffs_json(result.p_xi);
  j["corrected_coeffs"] = coeffs_json(result.corrected);
  j["interpolant_coeffs"] = coeffs_json(prob.p_n);
  j["max_err_before"] = result.max_err_before;
  j["max_err_after"] = result.max_err_after;
  j["improvement_factor"] = finite_or_null(result.improvement_factor);
  return j;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace rollekit::io
