#include "pff/staggered.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace pff {

namespace {

constexpr double kReferenceFloor = 1e-12;
// Relative floors keep step references above round-off when a load
// increment barely changes the state.
constexpr double kMomentumFloor = 1e-8;
constexpr double kEvolutionFloor = 1e-6;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double free_norm(const Eigen::VectorXd& r, std::span<const Index> fixed) {
  if (fixed.empty()) return r.norm();
  Eigen::VectorXd masked = r;
  for (Index i : fixed) masked[i] = 0.0;
  return masked.norm();
}

std::vector<Index> constrained_u_dofs(const StepBoundary& bc) {
  std::vector<Index> dofs;
  dofs.reserve(bc.u.size());
  for (const auto& p : bc.u) dofs.push_back(p.dof);
  std::sort(dofs.begin(), dofs.end());
  dofs.erase(std::unique(dofs.begin(), dofs.end()), dofs.end());
  return dofs;
}

std::vector<Index> unique_sorted(std::vector<Index> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<DirichletDof> homogeneous(std::span<const Index> dofs) {
  std::vector<DirichletDof> out;
  out.reserve(dofs.size());
  for (Index i : dofs) out.push_back({i, 0.0});
  return out;
}

}  // namespace

FieldState FieldState::zero(const Assembler& assembler) {
  const auto n = static_cast<Eigen::Index>(assembler.num_nodes());
  FieldState s;
  s.u = Eigen::VectorXd::Zero(2 * n);
  s.d = Eigen::VectorXd::Zero(n);
  s.d_prev = Eigen::VectorXd::Zero(n);
  s.gp.assign(assembler.num_gauss_points(), GaussPointState{});
  return s;
}

StaggeredSolver::StaggeredSolver(Assembler& assembler, const MaterialParams& params,
                                 const SolverConfig& config, SchemeKind scheme)
    : asm_(assembler),
      params_(params),
      config_(config),
      scheme_(scheme),
      u_solver_(config.linear),
      d_solver_(config.linear) {
  params_.validate();
  config_.validate();
  const auto n = static_cast<Eigen::Index>(assembler.num_nodes());
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const std::vector<GaussPointState> unloaded(assembler.num_gauss_points());
  source_scale_ = asm_.evolution_residual(ones, ones, unloaded, params_, Exec::serial).norm();
}

double StaggeredSolver::momentum_residual_norm(const FieldState& state, const StepBoundary& bc) {
  const auto fixed = constrained_u_dofs(bc);
  return free_norm(asm_.momentum_residual(state.u, state.d, params_, bc.traction, config_.exec),
                   fixed);
}

double StaggeredSolver::evolution_residual_norm(const FieldState& state, const StepBoundary& bc) {
  const auto pinned = unique_sorted(bc.d_pinned);
  return free_norm(
      asm_.evolution_residual(state.d, state.d_prev, state.gp, params_, config_.exec), pinned);
}

int StaggeredSolver::solve_momentum(FieldState& state, const StepBoundary& bc, double reference,
                                    double* relative_residual) {
  const auto fixed = constrained_u_dofs(bc);
  const auto zero_increments = homogeneous(fixed);
  const double target = config_.tol_nr * std::max(reference, kReferenceFloor);
  int solves = 0;
  std::vector<double> history;
  for (;;) {
    GlobalSystem sys =
        asm_.assemble_momentum(state.u, state.d, params_, bc.traction, config_.exec);
    const double norm = free_norm(sys.residual, fixed);
    history.push_back(norm / std::max(reference, kReferenceFloor));
    if (norm <= target) break;
    if (solves == config_.max_nr) {
      throw ConvergenceError("momentum Newton did not converge in " +
                                 std::to_string(config_.max_nr) + " iterations",
                             history);
    }
    Eigen::VectorXd rhs = -sys.residual;
    apply_dirichlet(sys.stiffness, rhs, zero_increments);
    u_solver_.factorize(sys.stiffness);
    state.u += u_solver_.solve(rhs);
    ++solves;
  }
  if (relative_residual != nullptr) *relative_residual = history.back();
  asm_.update_gauss_points(state.u, params_, state.gp, config_.exec);
  return solves;
}

StaggeredSolver::EvolutionResult StaggeredSolver::solve_evolution(FieldState& state,
                                                                  const StepBoundary& bc,
                                                                  double reference) {
  const auto pinned = unique_sorted(bc.d_pinned);
  const auto zero_increments = homogeneous(pinned);
  const double target = config_.tol_nr * std::max(reference, kReferenceFloor);
  const std::size_t ne = asm_.mesh().num_elements();
  constexpr int nq = Assembler::kGauss;

  // Working copy: psi_plus may be replaced by the half-step prediction.
  std::vector<GaussPointState> gp = state.gp;
  std::vector<double> extra;
  std::vector<double> d_start;
  EvolutionResult result;
  if (scheme_ != SchemeKind::ST) {
    extra.assign(gp.size(), 0.0);
    d_start.resize(gp.size());
    for (std::size_t e = 0; e < ne; ++e) {
      for (int q = 0; q < nq; ++q) {
        const std::size_t i = e * nq + q;
        d_start[i] = asm_.interpolate(state.d, e, q);
        extra[i] = extra_stiffness(scheme_, gp[i], d_start[i], params_, config_.d_cap);
        if (extra[i] != 0.0) ++result.gated;
      }
    }
  }
  const bool has_extra = result.gated > 0;

  std::vector<double> history;
  for (int it = 0;; ++it) {
    const bool first = it == 0;
    GlobalSystem sys = asm_.assemble_evolution(
        state.d, state.d_prev, gp, params_,
        first && has_extra ? std::span<const double>(extra) : std::span<const double>(),
        config_.exec);
    const double norm = free_norm(sys.residual, pinned);
    history.push_back(norm / std::max(reference, kReferenceFloor));
    if (norm <= target) break;
    if (result.n_nr == config_.max_nr) {
      throw ConvergenceError("evolution Newton did not converge in " +
                                 std::to_string(config_.max_nr) + " iterations",
                             history);
    }
    Eigen::VectorXd rhs = -sys.residual;
    apply_dirichlet(sys.stiffness, rhs, zero_increments);
    PivotReport report = d_solver_.factorize(sys.stiffness);
    if (first && has_extra && !report.positive_definite) {
      // Indefinite with the extra term: solve this iteration with plain K_dd.
      result.fallback = true;
      sys = asm_.assemble_evolution(state.d, state.d_prev, gp, params_, {}, config_.exec);
      rhs = -sys.residual;
      apply_dirichlet(sys.stiffness, rhs, zero_increments);
      report = d_solver_.factorize(sys.stiffness);
    }
    const Eigen::VectorXd delta = d_solver_.solve(rhs);
    ++result.n_nr;

    if (first && has_extra) {
      for (std::size_t e = 0; e < ne; ++e) {
        for (int q = 0; q < nq; ++q) {
          const std::size_t i = e * nq + q;
          if (extra[i] == 0.0) continue;
          gp[i] = update_active_energy(scheme_, gp[i], d_start[i], asm_.interpolate(delta, e, q),
                                       params_);
        }
      }
    }
    state.d += delta;
  }
  return result;
}

StaggeredStats StaggeredSolver::step(FieldState& state, const StepBoundary& bc,
                                     std::span<const Index> reaction_nodes, int component) {
  StaggeredStats stats;
  for (const auto& p : bc.u) state.u[p.dof] = p.value;
  for (Index n : bc.d_pinned) state.d[n] = 0.0;

  auto t0 = Clock::now();
  const Eigen::VectorXd trial =
      asm_.momentum_residual(state.u, state.d, params_, bc.traction, config_.exec);
  const double ref_u = std::max({free_norm(trial, constrained_u_dofs(bc)),
                                 kMomentumFloor * trial.norm(), kReferenceFloor});
  stats.n_nr_u += solve_momentum(state, bc, ref_u, &stats.final_residual_u);
  stats.time_u += seconds_since(t0);

  const double ref_d = std::max(
      {evolution_residual_norm(state, bc), kEvolutionFloor * source_scale_, kReferenceFloor});
  for (;;) {
    if (stats.n_stag == config_.max_stag) {
      throw ConvergenceError("staggered iteration did not converge in " +
                                 std::to_string(config_.max_stag) + " iterations",
                             stats.residual_history);
    }
    t0 = Clock::now();
    const EvolutionResult evo = solve_evolution(state, bc, ref_d);
    stats.time_d += seconds_since(t0);
    ++stats.n_stag;
    stats.n_nr_d += evo.n_nr;
    if (evo.fallback) ++stats.fallbacks;
    stats.gated_points = std::max(stats.gated_points, evo.gated);

    t0 = Clock::now();
    stats.n_nr_u += solve_momentum(state, bc, ref_u, &stats.final_residual_u);
    stats.time_u += seconds_since(t0);

    const double rd = evolution_residual_norm(state, bc) / ref_d;
    stats.residual_history.push_back(rd);
    if (rd < config_.tol_st) {
      stats.final_residual_d = rd;
      break;
    }
  }

  stats.min_increment = (state.d - state.d_prev).minCoeff();
  for (auto& g : state.gp) g.psi_max = std::max(g.psi_max, g.psi_plus);
  state.d_prev = state.d.cwiseMax(0.0);
  if (!reaction_nodes.empty()) {
    stats.reaction =
        asm_.reaction_force(state.u, state.d, params_, reaction_nodes, component, config_.exec);
  }
  return stats;
}

}  // namespace pff
