#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pff/constitutive.hpp"
#include "pff/oned.hpp"
#include "pff/schemes.hpp"

namespace pff {

enum class ProblemKind { tensile, shear, lshape, bar1d };

std::string_view to_string(ProblemKind problem);
ProblemKind parse_problem(std::string_view text);

/// Uniform steps of size `dt` up to `t_end`.
struct LoadSegment {
  double dt = 1.0;
  double t_end = 1.0;
};

struct RunConfig {
  ProblemKind problem = ProblemKind::tensile;
  SchemeKind scheme = SchemeKind::ST;

  MaterialParams material;  ///< 2D problems
  Bar1DParams bar;          ///< bar1d

  int nx = 100;                    ///< notched square
  int ny = 100;
  double lshape_h = 250.0 / 32.0;  ///< L-panel element size (mm)
  int bar_elements = 100;
  bool widen_length = true;        ///< raise l to two element sizes when smaller

  double rate = 3e-5;  ///< mm/s
  std::vector<LoadSegment> schedule;

  SolverConfig solver;

  std::string output_dir = "out";
  int snapshot_every = 0;  ///< VTK every n steps; 0 writes the final step only
  bool write_vtk = true;
  bool write_profiles = false;  ///< bar1d per-iteration d profiles

  /// Step end times, each t_j = segment start + j * dt.
  [[nodiscard]] std::vector<double> step_times() const;
  void validate() const;
};

/// Defaults per problem, including its material table and load schedule.
RunConfig default_config(ProblemKind problem);

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);
  [[nodiscard]] int line() const { return line_; }

 private:
  int line_;
};

/// INI-style text with sections [problem] [material] [mesh] [loading]
/// [solver] [output]. `#` and `;` start comments.
RunConfig parse_config_text(std::string_view text, const std::string& source = "<config>");
RunConfig parse_config(const std::filesystem::path& path);

}  // namespace pff
