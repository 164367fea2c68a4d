#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pff/mesh.hpp"

namespace pff {

struct StepRow {
  double time = 0.0;
  double u = 0.0;
  double reaction = 0.0;
  int n_stag = 0;
  int n_nr_u = 0;
  int n_nr_d = 0;
  double wall_time = 0.0;  ///< seconds; kept out of the main CSV

  bool operator==(const StepRow& other) const;
};

/// Header `time,u,reaction,n_stag,n_nr_u,n_nr_d`. Numbers use the shortest
/// round-trip form independent of the locale.
void write_csv(const std::vector<StepRow>& rows, const std::filesystem::path& path);

/// Inverse of write_csv. wall_time is left at zero.
std::vector<StepRow> read_csv(const std::filesystem::path& path);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

/// Legacy VTK ASCII unstructured grid with point data `d` (scalar) and `u`
/// (vector). `u` holds one value per node for line meshes and two for quads.
void write_vtk_snapshot(const Mesh& mesh, const Eigen::VectorXd& u, const Eigen::VectorXd& d,
                        const std::filesystem::path& path);

/// Contents of a legacy VTK file as written by write_vtk_snapshot.
struct VtkData {
  std::vector<std::array<double, 3>> points;
  std::vector<std::vector<int>> cells;
  std::vector<int> cell_types;
  std::vector<double> d;
  std::vector<std::array<double, 3>> u;
};

/// Strict reader for the subset written above. Throws std::runtime_error on
/// malformed input.
VtkData read_vtk(const std::filesystem::path& path);

}  // namespace pff
