#pragma once

#include <vector>

#include <Eigen/Core>

#include "pff/linsolve.hpp"
#include "pff/mesh.hpp"
#include "pff/schemes.hpp"
#include "pff/staggered.hpp"

namespace pff {

/// Bar in tension, AT1. The active energy is E eps^2 and the driving term
/// is -(1 - d) E eps^2, so psi_crit = Gc / (c_w l) is the elastic limit.
struct Bar1DParams {
  double young = 1.0;
  double g_c = 0.1;
  double length_l = 0.01;
  double eta = 1e-6;
  double tol_ir = 0.01;

  [[nodiscard]] static constexpr double c_w() { return 8.0 / 3.0; }
  [[nodiscard]] double gamma() const {
    return 27.0 * g_c / (64.0 * length_l * tol_ir * tol_ir);
  }
  [[nodiscard]] double psi_crit() const { return g_c / (c_w() * length_l); }
  void validate() const;
};

struct Bar1DState {
  Eigen::VectorXd u;        ///< nodal
  Eigen::VectorXd d;        ///< nodal
  Eigen::VectorXd d_prev;   ///< nodal, last accepted step
  Eigen::VectorXd eps;      ///< per element
  Eigen::VectorXd psi;      ///< per Gauss point (2 per element)
  Eigen::VectorXd psi_max;  ///< per Gauss point
};

/// 1D counterpart of StaggeredSolver with u(0) = 0 and u(L) prescribed.
/// Any scheme other than ST uses the combined fast update.
class Bar1D {
 public:
  Bar1D(const Mesh& line, const Bar1DParams& params, const SolverConfig& config);

  [[nodiscard]] Bar1DState initial_state() const;
  [[nodiscard]] std::size_t num_elements() const { return h_.size(); }

  /// One load step to u(L) = u_right. When `profiles` is non-null the nodal
  /// d after every evolution solve is appended to it.
  StaggeredStats evolve_1d(Bar1DState& state, SchemeKind scheme, double u_right,
                           std::vector<Eigen::VectorXd>* profiles = nullptr);

  /// Axial force carried by the bar (taken at the right end).
  [[nodiscard]] double reaction(const Bar1DState& state) const;

  /// F_d at frozen per-Gauss-point energy, free of the extra stiffness.
  [[nodiscard]] Eigen::VectorXd evolution_residual(const Bar1DState& state,
                                                   const Eigen::VectorXd& psi) const;
  [[nodiscard]] SparseMatrix evolution_tangent(const Bar1DState& state, const Eigen::VectorXd& psi,
                                               const std::vector<double>& extra) const;

 private:
  [[nodiscard]] double gauss_value(const Eigen::VectorXd& nodal, std::size_t e, int q) const;
  [[nodiscard]] Eigen::VectorXd momentum_residual(const Bar1DState& state) const;
  [[nodiscard]] double momentum_residual_norm(const Bar1DState& state) const;
  int solve_momentum(Bar1DState& state, double reference);
  int solve_evolution(Bar1DState& state, SchemeKind scheme, double reference, bool& fallback,
                      int& gated);

  Bar1DParams params_;
  SolverConfig config_;
  std::vector<double> h_;
  double source_scale_ = 0.0;
  LinearSolver u_solver_;
  LinearSolver d_solver_;
};

/// Clamped homogeneous AT1 solution d = max(0, 1 - Gc / (c_w l E eps^2)).
double homogeneous_oracle(double eps, const Bar1DParams& params);

/// Half-step energy for the 1D fast scheme:
/// psi (1 + 2 (1 - d) / g(d) * delta_d)^2 for delta_d > 0, psi otherwise.
double bar_energy_update(double psi, double d, double delta_d, double eta);

}  // namespace pff
