#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cvo/frame_pipeline.hpp"
#include "cvo/solver_config.hpp"

namespace cvo::cli {

enum class Mode { kAdaptive, kFixedEll };

struct RunConfig {
  std::filesystem::path dataset;
  std::filesystem::path intrinsics;
  std::filesystem::path out = "trajectory.txt";
  std::optional<std::filesystem::path> diag;       // per-frame CSV
  std::optional<std::filesystem::path> iter_diag;  // per-iteration CSV
  Mode mode = Mode::kAdaptive;
  SolverConfig solver;
  SelectionConfig selection;
  double association_tolerance = 0.02;
  std::size_t max_frames = 0;  // 0 = whole sequence

  /// Applies "key=value"; throws InvalidConfig for unknown keys or bad values.
  void apply_param(const std::string& assignment);

  /// Validates solver and selection settings against their invariants.
  void validate() const;

  /// The effective parameter set, one "key = value" per line.
  void print(std::ostream& os) const;
};

Mode parse_mode(const std::string& name);

/// Runs frame-to-frame odometry over an associated sequence and writes the
/// trajectory (and diagnostics when requested). Returns a process exit code.
int run_sequence(RunConfig config, std::ostream& out, std::ostream& err);

struct PairConfig {
  std::filesystem::path rgb1, depth1, rgb2, depth2;
  std::filesystem::path intrinsics;
  Mode mode = Mode::kAdaptive;
  SolverConfig solver;
  SelectionConfig selection;
};

int run_pair(const PairConfig& config, std::ostream& out, std::ostream& err);

/// Prints translational (m/s) and rotational (deg/s) RPE RMSE with 4 decimals.
int eval_rpe(const std::filesystem::path& estimated, const std::filesystem::path& groundtruth,
             double delta, const std::optional<std::filesystem::path>& residuals_csv,
             std::ostream& out, std::ostream& err);

int sensitivity_table(const std::vector<int>& orders, const std::vector<double>& tolerances,
                      const std::optional<std::filesystem::path>& csv_path, std::ostream& out,
                      std::ostream& err);

/// Entry point shared by the executable and the tests.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace cvo::cli
