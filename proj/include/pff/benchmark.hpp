#pragma once

#include <filesystem>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "pff/config.hpp"
#include "pff/io.hpp"
#include "pff/mesh.hpp"
#include "pff/staggered.hpp"

namespace pff {

/// Mesh, boundary data and reaction measurement of a 2D benchmark.
struct Problem {
  Mesh mesh;
  std::vector<Index> reaction_nodes;
  int reaction_component = 1;
  double effective_length = 0.0;  ///< l after optional widening

  /// Constrained dofs at applied displacement `u_bar`.
  std::function<StepBoundary(double u_bar)> boundary;
};

/// Throws std::invalid_argument for bar1d, which has no 2D setup.
Problem make_problem(const RunConfig& config);

struct StepView {
  int step = 0;
  double time = 0.0;
  double applied = 0.0;
  const Mesh& mesh;
  const Eigen::VectorXd& u;
  const Eigen::VectorXd& d;
  const StaggeredStats& stats;
};

using StepObserver = std::function<void(const StepView&)>;

struct StepExtra {
  int fallbacks = 0;
  int gated_points = 0;
  double min_increment = 0.0;
  double final_residual_u = 0.0;
  double final_residual_d = 0.0;
  double time_u = 0.0;
  double time_d = 0.0;
};

struct RunReport {
  ProblemKind problem = ProblemKind::tensile;
  SchemeKind scheme = SchemeKind::ST;
  double effective_length = 0.0;
  std::vector<StepRow> rows;
  std::vector<StepExtra> extras;
  Mesh mesh;
  Eigen::VectorXd u;
  Eigen::VectorXd d;
  std::vector<std::filesystem::path> files;

  [[nodiscard]] int max_n_stag() const;
  [[nodiscard]] long total_n_stag() const;
  [[nodiscard]] long total_nr_u() const;
  [[nodiscard]] long total_nr_d() const;
  [[nodiscard]] double peak_force() const;  ///< largest |reaction|
  [[nodiscard]] double min_increment() const;
  [[nodiscard]] int total_fallbacks() const;
};

struct RunOptions {
  bool write_files = true;
  StepObserver observer;
};

/// Executes the time loop. Non-convergence is rethrown as ConvergenceError
/// naming the failing step.
RunReport run_benchmark(const RunConfig& config, const RunOptions& options = {});

/// Runs every scheme in `schemes` on the same configuration.
std::vector<RunReport> run_sweep(const RunConfig& config, const std::vector<SchemeKind>& schemes,
                                 const RunOptions& options = {});

/// Columns scheme,max_n_stag,total_n_stag,total_nr_u,total_nr_d,peak_force.
void write_sweep_csv(const std::vector<RunReport>& reports, const std::filesystem::path& path);

}  // namespace pff
