#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "pff/assembly.hpp"

namespace pff {

enum class LinearSolverKind { direct, cg };

/// Smallest LDL^T pivot of a symmetric matrix. The index refers to the
/// original (unpermuted) row numbering.
struct PivotReport {
  bool positive_definite = false;
  double min_pivot = 0.0;
  Eigen::Index min_pivot_index = -1;
};

class SolveError : public std::runtime_error {
 public:
  SolveError(const std::string& what, Eigen::Index pivot)
      : std::runtime_error(what), pivot_(pivot) {}
  [[nodiscard]] Eigen::Index pivot_index() const { return pivot_; }

 private:
  Eigen::Index pivot_;
};

/// Symmetric sparse solver. The direct path reuses the fill-reducing
/// ordering as long as the sparsity pattern does not change.
class LinearSolver {
 public:
  explicit LinearSolver(LinearSolverKind kind = LinearSolverKind::direct);

  /// Factorizes `a` (direct) or prepares the preconditioner (cg). Never
  /// throws for indefinite input; inspect the returned report instead.
  PivotReport factorize(const SparseMatrix& a);

  /// Throws SolveError when the last factorization was not positive
  /// definite or CG did not converge.
  [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& b);

  [[nodiscard]] double last_relative_residual() const { return last_residual_; }
  [[nodiscard]] LinearSolverKind kind() const { return kind_; }

 private:
  bool same_pattern(const SparseMatrix& a) const;

  LinearSolverKind kind_;
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper,
                           Eigen::DiagonalPreconditioner<double>>
      cg_;
  std::vector<int> outer_;
  std::vector<int> inner_;
  SparseMatrix matrix_;
  PivotReport report_;
  double last_residual_ = 0.0;
};

/// Smallest pivot of a fresh LDL^T factorization.
PivotReport check_spd(const SparseMatrix& a);

/// One-shot factorize and solve with ||A x - b|| / ||b|| driven below 1e-12
/// by iterative refinement where reachable.
Eigen::VectorXd factor_solve(const SparseMatrix& a, const Eigen::VectorXd& b,
                             LinearSolverKind kind = LinearSolverKind::direct);

}  // namespace pff
