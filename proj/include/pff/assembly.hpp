#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "pff/constitutive.hpp"
#include "pff/mesh.hpp"

namespace pff {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

/// Element loops either run as a plain serial loop (the reference) or compute
/// element contributions in parallel and merge them in element order. Both
/// give bitwise identical global arrays.
enum class Exec { serial, parallel };

/// History and coupling scalars stored at each Gauss point.
struct GaussPointState {
  double tr_plus = 0.0;      ///< <tr eps>_+
  double dev_dot_dev = 0.0;  ///< eps_dev : eps_dev
  double psi_plus = 0.0;     ///< active energy, possibly a half-step prediction
  double psi_max = 0.0;      ///< largest accepted psi_plus so far
};

struct GlobalSystem {
  Eigen::VectorXd residual;
  SparseMatrix stiffness;
};

/// Constant traction applied on a list of straight boundary edges.
struct Traction {
  std::vector<std::array<Index, 2>> edges;
  Eigen::Vector2d value = Eigen::Vector2d::Zero();
};

struct DirichletDof {
  Index dof = 0;
  double increment = 0.0;
};

/// Bilinear-quad discretisation of one mesh with 2x2 Gauss quadrature.
/// Displacement dofs are (2 i, 2 i + 1) for node i; damage dof is i.
class Assembler {
 public:
  static constexpr int kGauss = 4;

  /// Throws std::invalid_argument for line meshes or when an element has a
  /// non-positive Jacobian determinant at a Gauss point.
  explicit Assembler(const Mesh& mesh);

  [[nodiscard]] const Mesh& mesh() const { return mesh_; }
  [[nodiscard]] std::size_t num_nodes() const { return mesh_.num_nodes(); }
  [[nodiscard]] std::size_t num_gauss_points() const { return kGauss * mesh_.num_elements(); }

  [[nodiscard]] double shape(std::size_t e, int q, int a) const { return qp_[e][q].n[a]; }
  [[nodiscard]] double weight(std::size_t e, int q) const { return qp_[e][q].w; }
  [[nodiscard]] double interpolate(const Eigen::VectorXd& nodal, std::size_t e, int q) const;
  [[nodiscard]] StrainState strain(const Eigen::VectorXd& u, std::size_t e, int q) const;

  /// Residual F_u = int B^T sigma - int N^T t and tangent K_uu.
  GlobalSystem assemble_momentum(const Eigen::VectorXd& u, const Eigen::VectorXd& d,
                                 const MaterialParams& params, const Traction* traction = nullptr,
                                 Exec exec = Exec::parallel);

  /// F_u only (no matrix).
  Eigen::VectorXd momentum_residual(const Eigen::VectorXd& u, const Eigen::VectorXd& d,
                                    const MaterialParams& params,
                                    const Traction* traction = nullptr,
                                    Exec exec = Exec::parallel);

  /// Residual F_d and tangent K_dd at frozen active energy. The active
  /// energy is read from `gp`; `extra` (empty or one entry per Gauss point)
  /// adds extra * N^T N to the tangent.
  GlobalSystem assemble_evolution(const Eigen::VectorXd& d, const Eigen::VectorXd& d_prev,
                                  std::span<const GaussPointState> gp,
                                  const MaterialParams& params, std::span<const double> extra = {},
                                  Exec exec = Exec::parallel);

  Eigen::VectorXd evolution_residual(const Eigen::VectorXd& d, const Eigen::VectorXd& d_prev,
                                     std::span<const GaussPointState> gp,
                                     const MaterialParams& params, Exec exec = Exec::parallel);

  /// Energy whose gradient is F_d at frozen psi_plus:
  /// int (1-d)^2 psi + w(d) Gc/(c_w l) + gamma/2 <d - d_prev>_-^2 + Gc l / c_w |grad d|^2.
  double evolution_energy(const Eigen::VectorXd& d, const Eigen::VectorXd& d_prev,
                          std::span<const GaussPointState> gp, const MaterialParams& params,
                          Exec exec = Exec::parallel);

  /// Recompute <tr eps>_+, eps_dev : eps_dev and psi_plus from u. psi_max is
  /// left untouched.
  void update_gauss_points(const Eigen::VectorXd& u, const MaterialParams& params,
                           std::span<GaussPointState> gp, Exec exec = Exec::parallel) const;

  /// Sum of the internal-force component over a node set (N per unit
  /// thickness).
  double reaction_force(const Eigen::VectorXd& u, const Eigen::VectorXd& d,
                        const MaterialParams& params, std::span<const Index> nodes,
                        int component, Exec exec = Exec::parallel);

 private:
  struct QuadPoint {
    std::array<double, 4> n{};
    std::array<double, 4> dndx{};
    std::array<double, 4> dndy{};
    double w = 0.0;  ///< Gauss weight times Jacobian determinant
  };

  struct Pattern {
    SparseMatrix matrix;             ///< structural zeros, compressed
    std::vector<int> scatter;        ///< per element, row-major local pairs
    int local = 0;
  };

  using Mat8 = Eigen::Matrix<double, 8, 8>;
  using Vec8 = Eigen::Matrix<double, 8, 1>;
  using Mat4 = Eigen::Matrix4d;
  using Vec4 = Eigen::Vector4d;

  void momentum_element(std::size_t e, const Eigen::VectorXd& u, const Eigen::VectorXd& d,
                        const MaterialParams& params, bool with_matrix, Mat8& ke,
                        Vec8& re) const;
  void evolution_element(std::size_t e, const Eigen::VectorXd& d, const Eigen::VectorXd& d_prev,
                         std::span<const GaussPointState> gp, const MaterialParams& params,
                         std::span<const double> extra, bool with_matrix, Mat4& ke,
                         Vec4& re) const;
  void add_traction(const Traction& traction, Eigen::VectorXd& residual) const;
  static Pattern build_pattern(const Mesh& mesh, int dofs_per_node);

  const Mesh& mesh_;
  std::vector<std::array<QuadPoint, kGauss>> qp_;
  Pattern u_pattern_;
  Pattern d_pattern_;
  std::vector<Mat8> ke8_;
  std::vector<Vec8> re8_;
  std::vector<Mat4> ke4_;
  std::vector<Vec4> re4_;
  std::vector<double> scalar_;
};

/// Dofs for one displacement component (0 = x, 1 = y) on a node set with a
/// common increment. Throws std::out_of_range for nodes outside the mesh.
std::vector<DirichletDof> dirichlet_dofs(const Mesh& mesh, std::span<const Index> nodes,
                                         int dofs_per_node, int component, double increment);

/// Symmetric row/column elimination on the increment system A x = b. The
/// prescribed increments move to the right-hand side of the free rows;
/// constrained rows keep their diagonal and get b_c = A_cc * increment.
void apply_dirichlet(SparseMatrix& a, Eigen::VectorXd& b, std::span<const DirichletDof> dofs);

/// Largest relative asymmetry max |A_ij - A_ji| / max |A_ij|.
double max_asymmetry(const SparseMatrix& a);

}  // namespace pff
