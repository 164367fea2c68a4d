#include "pff/oned.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/SparseCore>

namespace pff {

namespace {

constexpr double kReferenceFloor = 1e-12;
constexpr double kMomentumFloor = 1e-8;
constexpr double kEvolutionFloor = 1e-6;
constexpr double kGp = 0.57735026918962576451;
constexpr std::array<std::array<double, 2>, 2> kN{{{(1 + kGp) / 2, (1 - kGp) / 2},
                                                    {(1 - kGp) / 2, (1 + kGp) / 2}}};

SparseMatrix tridiagonal(const std::vector<Eigen::Matrix2d>& blocks) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(4 * blocks.size());
  for (std::size_t e = 0; e < blocks.size(); ++e) {
    const auto i = static_cast<int>(e);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) t.emplace_back(i + a, i + b, blocks[e](a, b));
    }
  }
  SparseMatrix m(static_cast<Eigen::Index>(blocks.size() + 1),
                 static_cast<Eigen::Index>(blocks.size() + 1));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

double free_norm(const Eigen::VectorXd& r, bool skip_ends) {
  if (!skip_ends) return r.norm();
  return r.segment(1, r.size() - 2).norm();
}

}  // namespace

void Bar1DParams::validate() const {
  if (!(young > 0.0)) throw std::invalid_argument("young must be positive");
  if (!(g_c > 0.0)) throw std::invalid_argument("g_c must be positive");
  if (!(length_l > 0.0)) throw std::invalid_argument("length_l must be positive");
  if (!(eta >= 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in [0, 1)");
  if (!(tol_ir > 0.0)) throw std::invalid_argument("tol_ir must be positive");
}

double homogeneous_oracle(double eps, const Bar1DParams& params) {
  const double drive = params.young * eps * eps;
  if (drive <= params.psi_crit()) return 0.0;
  return std::max(0.0, 1.0 - params.psi_crit() / drive);
}

double bar_energy_update(double psi, double d, double delta_d, double eta) {
  if (!(delta_d > 0.0)) return psi;
  const double f = 1.0 + 2.0 * (1.0 - d) / degradation(d, eta).g * delta_d;
  return psi * f * f;
}

Bar1D::Bar1D(const Mesh& line, const Bar1DParams& params, const SolverConfig& config)
    : params_(params), config_(config), u_solver_(config.linear), d_solver_(config.linear) {
  if (line.kind != CellKind::Line2) throw std::invalid_argument("Bar1D needs a line mesh");
  params_.validate();
  config_.validate();
  for (std::size_t e = 0; e < line.num_elements(); ++e) {
    const auto& el = line.elements[e];
    if (el.nodes[0] != static_cast<Index>(e) || el.nodes[1] != static_cast<Index>(e + 1)) {
      throw std::invalid_argument("Bar1D expects consecutively numbered nodes");
    }
    const double h = element_measure(line, e);
    if (!(h > 0.0)) throw std::invalid_argument("degenerate bar element");
    h_.push_back(h);
  }
  Bar1DState unloaded = initial_state();
  unloaded.d.setOnes();
  unloaded.d_prev.setOnes();
  source_scale_ = evolution_residual(unloaded, unloaded.psi).norm();
}

Bar1DState Bar1D::initial_state() const {
  const auto ne = static_cast<Eigen::Index>(h_.size());
  Bar1DState s;
  s.u = Eigen::VectorXd::Zero(ne + 1);
  s.d = Eigen::VectorXd::Zero(ne + 1);
  s.d_prev = Eigen::VectorXd::Zero(ne + 1);
  s.eps = Eigen::VectorXd::Zero(ne);
  s.psi = Eigen::VectorXd::Zero(2 * ne);
  s.psi_max = Eigen::VectorXd::Zero(2 * ne);
  return s;
}

double Bar1D::gauss_value(const Eigen::VectorXd& nodal, std::size_t e, int q) const {
  return kN[q][0] * nodal[e] + kN[q][1] * nodal[e + 1];
}

Eigen::VectorXd Bar1D::momentum_residual(const Bar1DState& state) const {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(state.u.size());
  for (std::size_t e = 0; e < h_.size(); ++e) {
    double gbar = 0.0;
    for (int q = 0; q < 2; ++q) gbar += 0.5 * degradation(gauss_value(state.d, e, q), params_.eta).g;
    const double force = params_.young * gbar * (state.u[e + 1] - state.u[e]) / h_[e];
    r[e] -= force;
    r[e + 1] += force;
  }
  return r;
}

double Bar1D::momentum_residual_norm(const Bar1DState& state) const {
  return free_norm(momentum_residual(state), true);
}

double Bar1D::reaction(const Bar1DState& state) const {
  const std::size_t e = h_.size() - 1;
  double gbar = 0.0;
  for (int q = 0; q < 2; ++q) gbar += 0.5 * degradation(gauss_value(state.d, e, q), params_.eta).g;
  return params_.young * gbar * (state.u[e + 1] - state.u[e]) / h_[e];
}

int Bar1D::solve_momentum(Bar1DState& state, double reference) {
  const double target = config_.tol_nr * std::max(reference, kReferenceFloor);
  const auto n = state.u.size();
  int solves = 0;
  while (momentum_residual_norm(state) > target) {
    if (solves == config_.max_nr) throw ConvergenceError("bar momentum did not converge", {});
    std::vector<Eigen::Matrix2d> blocks(h_.size());
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    for (std::size_t e = 0; e < h_.size(); ++e) {
      double gbar = 0.0;
      for (int q = 0; q < 2; ++q) {
        gbar += 0.5 * degradation(gauss_value(state.d, e, q), params_.eta).g;
      }
      const double k = params_.young * gbar / h_[e];
      blocks[e] << k, -k, -k, k;
      const double force = k * (state.u[e + 1] - state.u[e]);
      r[e] -= force;
      r[e + 1] += force;
    }
    SparseMatrix a = tridiagonal(blocks);
    Eigen::VectorXd rhs = -r;
    const std::vector<DirichletDof> ends{{0, 0.0}, {static_cast<Index>(n - 1), 0.0}};
    apply_dirichlet(a, rhs, ends);
    u_solver_.factorize(a);
    state.u += u_solver_.solve(rhs);
    ++solves;
  }
  for (std::size_t e = 0; e < h_.size(); ++e) {
    state.eps[e] = (state.u[e + 1] - state.u[e]) / h_[e];
    const double psi = params_.young * state.eps[e] * state.eps[e];
    state.psi[2 * e] = psi;
    state.psi[2 * e + 1] = psi;
  }
  return solves;
}

Eigen::VectorXd Bar1D::evolution_residual(const Bar1DState& state,
                                          const Eigen::VectorXd& psi) const {
  const double diffusion = 2.0 * params_.g_c * params_.length_l / Bar1DParams::c_w();
  const double source = params_.psi_crit();
  const double gamma = params_.gamma();
  Eigen::VectorXd r = Eigen::VectorXd::Zero(state.d.size());
  for (std::size_t e = 0; e < h_.size(); ++e) {
    const double flux = diffusion * (state.d[e + 1] - state.d[e]) / h_[e];
    r[e] -= flux;
    r[e + 1] += flux;
    for (int q = 0; q < 2; ++q) {
      const double dq = gauss_value(state.d, e, q);
      const double dpq = gauss_value(state.d_prev, e, q);
      double local = -(1.0 - dq) * psi[2 * e + q] + source;
      if (dq - dpq < 0.0) local += gamma * (dq - dpq);
      for (int a = 0; a < 2; ++a) r[e + a] += 0.5 * h_[e] * kN[q][a] * local;
    }
  }
  return r;
}

SparseMatrix Bar1D::evolution_tangent(const Bar1DState& state, const Eigen::VectorXd& psi,
                                      const std::vector<double>& extra) const {
  const double diffusion = 2.0 * params_.g_c * params_.length_l / Bar1DParams::c_w();
  const double gamma = params_.gamma();
  std::vector<Eigen::Matrix2d> blocks(h_.size());
  for (std::size_t e = 0; e < h_.size(); ++e) {
    const double kd = diffusion / h_[e];
    blocks[e] << kd, -kd, -kd, kd;
    for (int q = 0; q < 2; ++q) {
      const double dq = gauss_value(state.d, e, q);
      const double dpq = gauss_value(state.d_prev, e, q);
      double k = psi[2 * e + q];
      if (dq - dpq < 0.0) k += gamma;
      if (!extra.empty()) k += extra[2 * e + q];
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) blocks[e](a, b) += 0.5 * h_[e] * kN[q][a] * kN[q][b] * k;
      }
    }
  }
  return tridiagonal(blocks);
}

int Bar1D::solve_evolution(Bar1DState& state, SchemeKind scheme, double reference,
                           bool& fallback, int& gated) {
  const double target = config_.tol_nr * std::max(reference, kReferenceFloor);
  const std::size_t ngp = 2 * h_.size();
  Eigen::VectorXd psi = state.psi;
  std::vector<double> extra;
  std::vector<double> d_start(ngp);
  gated = 0;
  fallback = false;
  if (scheme != SchemeKind::ST) {
    extra.assign(ngp, 0.0);
    for (std::size_t e = 0; e < h_.size(); ++e) {
      for (int q = 0; q < 2; ++q) {
        const std::size_t i = 2 * e + q;
        const double d = gauss_value(state.d, e, q);
        d_start[i] = d;
        if (psi[i] > params_.psi_crit() && psi[i] > state.psi_max[i] && d < config_.d_cap) {
          const double one_minus = 1.0 - d;
          extra[i] = -4.0 * one_minus * one_minus / degradation(d, params_.eta).g * psi[i];
          ++gated;
        }
      }
    }
  }
  const std::vector<double> none;
  int solves = 0;
  for (;;) {
    const bool first = solves == 0;
    const Eigen::VectorXd r = evolution_residual(state, psi);
    if (r.norm() <= target) break;
    if (solves == config_.max_nr) throw ConvergenceError("bar evolution did not converge", {});
    SparseMatrix k = evolution_tangent(state, psi, first && gated > 0 ? extra : none);
    if (!d_solver_.factorize(k).positive_definite && first && gated > 0) {
      fallback = true;
      k = evolution_tangent(state, psi, none);
      d_solver_.factorize(k);
    }
    const Eigen::VectorXd delta = d_solver_.solve(-r);
    ++solves;
    if (first && gated > 0) {
      for (std::size_t e = 0; e < h_.size(); ++e) {
        for (int q = 0; q < 2; ++q) {
          const std::size_t i = 2 * e + q;
          if (extra[i] == 0.0) continue;
          psi[i] = bar_energy_update(psi[i], d_start[i], gauss_value(delta, e, q), params_.eta);
        }
      }
    }
    state.d += delta;
  }
  return solves;
}

StaggeredStats Bar1D::evolve_1d(Bar1DState& state, SchemeKind scheme, double u_right,
                                std::vector<Eigen::VectorXd>* profiles) {
  StaggeredStats stats;
  state.u[0] = 0.0;
  state.u[state.u.size() - 1] = u_right;
  const Eigen::VectorXd trial = momentum_residual(state);
  const double ref_u =
      std::max({free_norm(trial, true), kMomentumFloor * trial.norm(), kReferenceFloor});
  stats.n_nr_u += solve_momentum(state, ref_u);
  const double ref_d = std::max({evolution_residual(state, state.psi).norm(),
                                 kEvolutionFloor * source_scale_, kReferenceFloor});
  for (;;) {
    if (stats.n_stag == config_.max_stag) {
      throw ConvergenceError("bar staggered iteration did not converge", stats.residual_history);
    }
    bool fallback = false;
    int gated = 0;
    stats.n_nr_d += solve_evolution(state, scheme, ref_d, fallback, gated);
    ++stats.n_stag;
    if (fallback) ++stats.fallbacks;
    stats.gated_points = std::max(stats.gated_points, gated);
    if (profiles != nullptr) profiles->push_back(state.d);
    stats.n_nr_u += solve_momentum(state, ref_u);
    const double rd = evolution_residual(state, state.psi).norm() / ref_d;
    stats.residual_history.push_back(rd);
    if (rd < config_.tol_st) {
      stats.final_residual_d = rd;
      break;
    }
  }
  stats.final_residual_u = momentum_residual_norm(state) / ref_u;
  stats.min_increment = (state.d - state.d_prev).minCoeff();
  state.psi_max = state.psi_max.cwiseMax(state.psi);
  state.d_prev = state.d.cwiseMax(0.0);
  stats.reaction = reaction(state);
  return stats;
}

}  // namespace pff
