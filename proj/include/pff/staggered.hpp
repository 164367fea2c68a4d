#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pff/assembly.hpp"
#include "pff/linsolve.hpp"
#include "pff/schemes.hpp"

namespace pff {

struct PrescribedDof {
  Index dof = 0;
  double value = 0.0;
};

/// Boundary data for one load step: total displacement values on
/// constrained dofs, nodes whose damage is held at zero, optional traction.
struct StepBoundary {
  std::vector<PrescribedDof> u;
  std::vector<Index> d_pinned;
  const Traction* traction = nullptr;
};

struct FieldState {
  Eigen::VectorXd u;
  Eigen::VectorXd d;
  Eigen::VectorXd d_prev;
  std::vector<GaussPointState> gp;

  static FieldState zero(const Assembler& assembler);
};

struct StaggeredStats {
  int n_stag = 0;  ///< evolution solves in the step
  int n_nr_u = 0;
  int n_nr_d = 0;
  int fallbacks = 0;     ///< iterations where the extra stiffness was dropped
  int gated_points = 0;  ///< largest number of gated Gauss points in one iteration
  std::vector<double> residual_history;  ///< ||R_d|| / reference after each iteration
  double reaction = 0.0;
  double final_residual_u = 0.0;  ///< relative, last momentum solve
  double final_residual_d = 0.0;  ///< relative, staggered check
  double min_increment = 0.0;     ///< min over nodes of d - d_prev at acceptance
  double time_u = 0.0;            ///< seconds
  double time_d = 0.0;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), history_(std::move(history)) {}
  [[nodiscard]] const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

/// Staggered driver for one discretisation. Holds factorization caches, so
/// one instance must not be used from several threads at once.
class StaggeredSolver {
 public:
  StaggeredSolver(Assembler& assembler, const MaterialParams& params, const SolverConfig& config,
                  SchemeKind scheme);

  /// Advances `state` by one load step. The reaction is summed over
  /// `reaction_nodes` in displacement component `component`.
  StaggeredStats step(FieldState& state, const StepBoundary& bc,
                      std::span<const Index> reaction_nodes = {}, int component = 1);

  /// Newton on the momentum balance at fixed d, then the Gauss-point strain
  /// scalars are refreshed from u. Returns the number of linear solves and
  /// writes the relative residual reached.
  int solve_momentum(FieldState& state, const StepBoundary& bc, double reference,
                     double* relative_residual = nullptr);

  struct EvolutionResult {
    int n_nr = 0;
    bool fallback = false;
    int gated = 0;
  };

  /// Newton on the evolution equation at frozen coupling. The first
  /// iteration carries the scheme's extra stiffness and triggers the one-time
  /// half-step energy update.
  EvolutionResult solve_evolution(FieldState& state, const StepBoundary& bc, double reference);

  /// ||R_d|| over the free damage dofs with psi_plus taken from `state.gp`.
  double evolution_residual_norm(const FieldState& state, const StepBoundary& bc);
  double momentum_residual_norm(const FieldState& state, const StepBoundary& bc);

  [[nodiscard]] SchemeKind scheme() const { return scheme_; }
  [[nodiscard]] const MaterialParams& params() const { return params_; }
  [[nodiscard]] const SolverConfig& config() const { return config_; }

 private:
  Assembler& asm_;
  MaterialParams params_;
  SolverConfig config_;
  SchemeKind scheme_;
  double source_scale_ = 0.0;  ///< ||int N Gc / (c_w l)||, sets the damage reference floor
  LinearSolver u_solver_;
  LinearSolver d_solver_;
};

}  // namespace pff
