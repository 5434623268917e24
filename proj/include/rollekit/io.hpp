#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "rollekit/correct.hpp"
#include "rollekit/kernels.hpp"
#include "rollekit/rolle.hpp"

namespace rollekit::io {

// Exact decimal round-trip formatting (17 significant digits).
std::string fmt17(double v);

// Trajectory CSV: header x,xi,delta_reconstructed,delta_true,abs_diff, one
// row per sample sorted by x; each guard band appears as a
// `# guard node=<v> [a,b]` comment line at its row gap.
void write_trajectory_csv(const std::filesystem::path& path, const RolleTrajectory& traj,
                          const ReconstructionTable& table);

void write_reconstruction_csv(const std::filesystem::path& path,
                              const ReconstructionTable& table);

// Before/after pointwise error CSV: x,err_before,err_after.
void write_error_csv(const std::filesystem::path& path, const kernels::ErrorGrid& grid);

// Parsed CSV: numeric rows only, comment lines collected separately.
struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> comments;
};
CsvData read_csv(const std::filesystem::path& path);

struct RunParams {
  std::string function_text;
  std::vector<double> nodes;
  double x_z = 1e-5;
  double step = 5e-5;
  bool polish = false;
  int fit_degree = 6;
  std::string branch = "all";
};

struct BranchReport {
  int index = 0;  // 1-based, ordered by seed xi
  const RolleTrajectory* traj = nullptr;
  const ReconstructionTable* table = nullptr;
};

// Summary documents; their shape is documented by the JSON schemas in docs/.
nlohmann::json solve_summary(const InterpolationProblem& prob, const RunParams& params,
                             const std::vector<RolleSeed>& seeds,
                             const std::vector<BranchReport>& branches);
nlohmann::json correction_report(const InterpolationProblem& prob, const RunParams& params,
                                 const CorrectionResult& result, int branch);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace rollekit::io
