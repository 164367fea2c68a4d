#include "pff/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pff {

namespace {

constexpr double kTargetResidual = 1e-12;
constexpr int kMaxRefinement = 4;

PivotReport pivots_of(const Eigen::VectorXd& diag,
                      const Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int>& pinv) {
  PivotReport r;
  r.min_pivot = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < diag.size(); ++k) {
    if (diag[k] < r.min_pivot || std::isnan(diag[k])) {
      r.min_pivot = diag[k];
      r.min_pivot_index = pinv.size() > 0 ? pinv.indices()[k] : k;
      if (std::isnan(diag[k])) break;
    }
  }
  r.positive_definite = diag.size() > 0 && r.min_pivot > 0.0 && std::isfinite(r.min_pivot);
  return r;
}

}  // namespace

LinearSolver::LinearSolver(LinearSolverKind kind) : kind_(kind) {
  cg_.setTolerance(kTargetResidual);
}

bool LinearSolver::same_pattern(const SparseMatrix& a) const {
  if (outer_.empty() || a.outerSize() + 1 != static_cast<Eigen::Index>(outer_.size()) ||
      a.nonZeros() != static_cast<Eigen::Index>(inner_.size())) {
    return false;
  }
  return std::equal(outer_.begin(), outer_.end(), a.outerIndexPtr()) &&
         std::equal(inner_.begin(), inner_.end(), a.innerIndexPtr());
}

PivotReport LinearSolver::factorize(const SparseMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix is not square");
  matrix_ = a;
  matrix_.makeCompressed();
  if (kind_ == LinearSolverKind::cg) {
    cg_.compute(matrix_);
    const Eigen::VectorXd diag = matrix_.diagonal();
    report_ = pivots_of(diag, {});
    return report_;
  }
  if (!same_pattern(matrix_)) {
    ldlt_.analyzePattern(matrix_);
    outer_.assign(matrix_.outerIndexPtr(), matrix_.outerIndexPtr() + matrix_.outerSize() + 1);
    inner_.assign(matrix_.innerIndexPtr(), matrix_.innerIndexPtr() + matrix_.nonZeros());
  }
  ldlt_.factorize(matrix_);
  if (ldlt_.info() != Eigen::Success) {
    // The factorization stops at the first exactly-zero pivot.
    report_ = {false, 0.0, -1};
    const Eigen::VectorXd& diag = ldlt_.vectorD();
    for (Eigen::Index k = 0; k < diag.size(); ++k) {
      if (diag[k] == 0.0) {
        report_.min_pivot_index = ldlt_.permutationPinv().indices()[k];
        break;
      }
    }
    return report_;
  }
  report_ = pivots_of(ldlt_.vectorD(), ldlt_.permutationPinv());
  return report_;
}

Eigen::VectorXd LinearSolver::solve(const Eigen::VectorXd& b) {
  if (b.size() != matrix_.rows()) throw std::invalid_argument("right-hand side size mismatch");
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    last_residual_ = 0.0;
    return Eigen::VectorXd::Zero(b.size());
  }
  if (kind_ == LinearSolverKind::cg) {
    Eigen::VectorXd x = cg_.solve(b);
    last_residual_ = (matrix_ * x - b).norm() / bnorm;
    if (cg_.info() != Eigen::Success && last_residual_ > 1e-8) {
      throw SolveError("conjugate gradient did not converge", -1);
    }
    return x;
  }
  if (!report_.positive_definite) {
    throw SolveError("matrix is not positive definite (pivot " +
                         std::to_string(report_.min_pivot) + " at row " +
                         std::to_string(report_.min_pivot_index) + ")",
                     report_.min_pivot_index);
  }
  Eigen::VectorXd x = ldlt_.solve(b);
  Eigen::VectorXd r = b - matrix_ * x;
  last_residual_ = r.norm() / bnorm;
  for (int it = 0; it < kMaxRefinement && last_residual_ > kTargetResidual; ++it) {
    const Eigen::VectorXd candidate = x + ldlt_.solve(r);
    const Eigen::VectorXd rc = b - matrix_ * candidate;
    const double res = rc.norm() / bnorm;
    if (!(res < last_residual_)) break;
    x = candidate;
    r = rc;
    last_residual_ = res;
  }
  return x;
}

PivotReport check_spd(const SparseMatrix& a) {
  LinearSolver solver(LinearSolverKind::direct);
  return solver.factorize(a);
}

Eigen::VectorXd factor_solve(const SparseMatrix& a, const Eigen::VectorXd& b,
                             LinearSolverKind kind) {
  LinearSolver solver(kind);
  const PivotReport report = solver.factorize(a);
  if (kind == LinearSolverKind::direct && !report.positive_definite) {
    throw SolveError("matrix is singular or indefinite at row " +
                         std::to_string(report.min_pivot_index),
                     report.min_pivot_index);
  }
  return solver.solve(b);
}

}  // namespace pff
