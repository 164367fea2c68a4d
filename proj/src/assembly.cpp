#include "pff/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pff {

namespace {

constexpr double kGaussCoord = 0.57735026918962576451;  // 1 / sqrt(3)
constexpr std::array<double, 4> kXi{-kGaussCoord, kGaussCoord, kGaussCoord, -kGaussCoord};
constexpr std::array<double, 4> kEta{-kGaussCoord, -kGaussCoord, kGaussCoord, kGaussCoord};

}  // namespace

Assembler::Assembler(const Mesh& mesh) : mesh_(mesh) {
  if (mesh.kind != CellKind::Quad4) {
    throw std::invalid_argument("Assembler supports quadrilateral meshes only");
  }
  qp_.resize(mesh.num_elements());
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto& el = mesh.elements[e];
    for (int q = 0; q < kGauss; ++q) {
      const double xi = kXi[q];
      const double eta = kEta[q];
      const std::array<double, 4> n{(1 - xi) * (1 - eta) / 4, (1 + xi) * (1 - eta) / 4,
                                    (1 + xi) * (1 + eta) / 4, (1 - xi) * (1 + eta) / 4};
      const std::array<double, 4> dxi{-(1 - eta) / 4, (1 - eta) / 4, (1 + eta) / 4,
                                      -(1 + eta) / 4};
      const std::array<double, 4> deta{-(1 - xi) / 4, -(1 + xi) / 4, (1 + xi) / 4,
                                       (1 - xi) / 4};
      double j00 = 0, j01 = 0, j10 = 0, j11 = 0;
      for (int a = 0; a < 4; ++a) {
        const auto& x = mesh.nodes[el.nodes[a]].x;
        j00 += dxi[a] * x[0];
        j01 += dxi[a] * x[1];
        j10 += deta[a] * x[0];
        j11 += deta[a] * x[1];
      }
      const double det = j00 * j11 - j01 * j10;
      if (!(det > 0.0)) {
        throw std::invalid_argument("element " + std::to_string(e) +
                                    " has a non-positive Jacobian determinant");
      }
      QuadPoint& p = qp_[e][q];
      p.n = n;
      p.w = det;  // unit Gauss weights
      for (int a = 0; a < 4; ++a) {
        p.dndx[a] = (j11 * dxi[a] - j01 * deta[a]) / det;
        p.dndy[a] = (-j10 * dxi[a] + j00 * deta[a]) / det;
      }
    }
  }
  u_pattern_ = build_pattern(mesh, 2);
  d_pattern_ = build_pattern(mesh, 1);
  ke8_.resize(mesh.num_elements());
  re8_.resize(mesh.num_elements());
  ke4_.resize(mesh.num_elements());
  re4_.resize(mesh.num_elements());
  scalar_.resize(mesh.num_elements());
}

Assembler::Pattern Assembler::build_pattern(const Mesh& mesh, int dofs_per_node) {
  const int local = 4 * dofs_per_node;
  const auto n = static_cast<int>(mesh.num_nodes()) * dofs_per_node;
  std::vector<std::vector<int>> columns(n);
  auto dof = [dofs_per_node](const Element& el, int i) {
    return el.nodes[i / dofs_per_node] * dofs_per_node + i % dofs_per_node;
  };
  for (const auto& el : mesh.elements) {
    for (int a = 0; a < local; ++a) {
      for (int b = 0; b < local; ++b) columns[dof(el, b)].push_back(dof(el, a));
    }
  }
  Pattern p;
  p.local = local;
  std::vector<Eigen::Triplet<double>> triplets;
  for (int c = 0; c < n; ++c) {
    auto& rows = columns[c];
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    for (int r : rows) triplets.emplace_back(r, c, 0.0);
  }
  p.matrix.resize(n, n);
  p.matrix.setFromTriplets(triplets.begin(), triplets.end());
  p.matrix.makeCompressed();

  const int* outer = p.matrix.outerIndexPtr();
  const int* inner = p.matrix.innerIndexPtr();
  p.scatter.resize(mesh.num_elements() * local * local);
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto& el = mesh.elements[e];
    for (int a = 0; a < local; ++a) {
      for (int b = 0; b < local; ++b) {
        const int r = dof(el, a);
        const int c = dof(el, b);
        const int* pos = std::lower_bound(inner + outer[c], inner + outer[c + 1], r);
        p.scatter[(e * local + a) * local + b] = static_cast<int>(pos - inner);
      }
    }
  }
  return p;
}

double Assembler::interpolate(const Eigen::VectorXd& nodal, std::size_t e, int q) const {
  const auto& el = mesh_.elements[e];
  const auto& p = qp_[e][q];
  double v = 0.0;
  for (int a = 0; a < 4; ++a) v += p.n[a] * nodal[el.nodes[a]];
  return v;
}

StrainState Assembler::strain(const Eigen::VectorXd& u, std::size_t e, int q) const {
  const auto& el = mesh_.elements[e];
  const auto& p = qp_[e][q];
  double exx = 0, eyy = 0, gxy = 0;
  for (int a = 0; a < 4; ++a) {
    const double ux = u[2 * el.nodes[a]];
    const double uy = u[2 * el.nodes[a] + 1];
    exx += p.dndx[a] * ux;
    eyy += p.dndy[a] * uy;
    gxy += p.dndy[a] * ux + p.dndx[a] * uy;
  }
  return StrainState::plane(exx, eyy, gxy);
}

void Assembler::momentum_element(std::size_t e, const Eigen::VectorXd& u,
                                 const Eigen::VectorXd& d, const MaterialParams& params,
                                 bool with_matrix, Mat8& ke, Vec8& re) const {
  static constexpr std::array<int, 3> kInPlane{0, 1, 3};
  ke.setZero();
  re.setZero();
  for (int q = 0; q < kGauss; ++q) {
    const auto& p = qp_[e][q];
    Eigen::Matrix<double, 3, 8> b = Eigen::Matrix<double, 3, 8>::Zero();
    for (int a = 0; a < 4; ++a) {
      b(0, 2 * a) = p.dndx[a];
      b(1, 2 * a + 1) = p.dndy[a];
      b(2, 2 * a) = p.dndy[a];
      b(2, 2 * a + 1) = p.dndx[a];
    }
    const StrainState s = strain(u, e, q);
    const double dq = interpolate(d, e, q);
    const Voigt sig = stress(s, dq, params);
    const Eigen::Vector3d sig3(sig[0], sig[1], sig[3]);
    re.noalias() += p.w * (b.transpose() * sig3);
    if (with_matrix) {
      const VoigtMatrix c = tangent_uu(s, dq, params);
      Eigen::Matrix3d c3;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) c3(i, j) = c(kInPlane[i], kInPlane[j]);
      }
      ke.noalias() += p.w * (b.transpose() * c3 * b);
    }
  }
}

void Assembler::evolution_element(std::size_t e, const Eigen::VectorXd& d,
                                  const Eigen::VectorXd& d_prev,
                                  std::span<const GaussPointState> gp,
                                  const MaterialParams& params, std::span<const double> extra,
                                  bool with_matrix, Mat4& ke, Vec4& re) const {
  const auto& el = mesh_.elements[e];
  const double cw = params.c_w();
  const double source = params.g_c / (cw * params.length_l);
  const double diffusion = 2.0 * params.g_c * params.length_l / cw;
  const double gamma = params.gamma();
  const bool at2 = params.at_model == AtModel::AT2;

  Vec4 de;
  Vec4 dpe;
  for (int a = 0; a < 4; ++a) {
    de[a] = d[el.nodes[a]];
    dpe[a] = d_prev[el.nodes[a]];
  }
  ke.setZero();
  re.setZero();
  for (int q = 0; q < kGauss; ++q) {
    const auto& p = qp_[e][q];
    const Vec4 n(p.n[0], p.n[1], p.n[2], p.n[3]);
    Eigen::Matrix<double, 2, 4> grad;
    grad.row(0) = Eigen::RowVector4d(p.dndx[0], p.dndx[1], p.dndx[2], p.dndx[3]);
    grad.row(1) = Eigen::RowVector4d(p.dndy[0], p.dndy[1], p.dndy[2], p.dndy[3]);

    const double dq = n.dot(de);
    const double dpq = n.dot(dpe);
    const double psi = gp[e * kGauss + q].psi_plus;

    double r = -2.0 * (1.0 - dq) * psi + (at2 ? 2.0 * source * dq : source);
    double k = 2.0 * psi + (at2 ? 2.0 * source : 0.0);
    if (dq - dpq < 0.0) {
      r += gamma * (dq - dpq);
      k += gamma;
    }
    if (!extra.empty()) k += extra[e * kGauss + q];

    re.noalias() += p.w * (r * n + diffusion * grad.transpose() * (grad * de));
    if (with_matrix) {
      ke.noalias() += p.w * (k * n * n.transpose() + diffusion * grad.transpose() * grad);
    }
  }
}

void Assembler::add_traction(const Traction& traction, Eigen::VectorXd& residual) const {
  // Constant traction on a straight edge: each end node takes half the load.
  for (const auto& edge : traction.edges) {
    const auto& a = mesh_.nodes.at(edge[0]).x;
    const auto& b = mesh_.nodes.at(edge[1]).x;
    const double length = std::hypot(b[0] - a[0], b[1] - a[1]);
    for (Index node : edge) {
      residual[2 * node] -= 0.5 * length * traction.value[0];
      residual[2 * node + 1] -= 0.5 * length * traction.value[1];
    }
  }
}

GlobalSystem Assembler::assemble_momentum(const Eigen::VectorXd& u, const Eigen::VectorXd& d,
                                          const MaterialParams& params,
                                          const Traction* traction, Exec exec) {
  const auto ne = static_cast<std::ptrdiff_t>(mesh_.num_elements());
  GlobalSystem sys;
  sys.residual = Eigen::VectorXd::Zero(2 * static_cast<Eigen::Index>(num_nodes()));
  sys.stiffness = u_pattern_.matrix;
  double* values = sys.stiffness.valuePtr();
  const int local = u_pattern_.local;

  auto scatter = [&](std::size_t e, const Mat8& ke, const Vec8& re) {
    const auto& el = mesh_.elements[e];
    const int* map = &u_pattern_.scatter[e * local * local];
    for (int a = 0; a < local; ++a) {
      sys.residual[2 * el.nodes[a / 2] + a % 2] += re[a];
      for (int b = 0; b < local; ++b) values[map[a * local + b]] += ke(a, b);
    }
  };

  if (exec == Exec::serial) {
    Mat8 ke;
    Vec8 re;
    for (std::ptrdiff_t e = 0; e < ne; ++e) {
      momentum_element(e, u, d, params, true, ke, re);
      scatter(e, ke, re);
    }
  } else {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t e = 0; e < ne; ++e) {
      momentum_element(e, u, d, params, true, ke8_[e], re8_[e]);
    }
    for (std::ptrdiff_t e = 0; e < ne; ++e) scatter(e, ke8_[e], re8_[e]);
  }
  if (traction != nullptr) add_traction(*traction, sys.residual);
  return sys;
}

Eigen::VectorXd Assembler::momentum_residual(const Eigen::VectorXd& u, const Eigen::VectorXd& d,
                                             const MaterialParams& params,
                                             const Traction* traction, Exec exec) {
  const auto ne = static_cast<std::ptrdiff_t>(mesh_.num_elements());
  Eigen::VectorXd residual = Eigen::VectorXd::Zero(2 * static_cast<Eigen::Index>(num_nodes()));
  auto scatter = [&](std::size_t e, const Vec8& re) {
    const auto& el = mesh_.elements[e];
    for (int a = 0; a < 8; ++a) residual[2 * el.nodes[a / 2] + a % 2] += re[a];
  };
  if (exec == Exec::serial) {
    Mat8 ke;
    Vec8 re;
    for (std::ptrdiff_t e = 0; e < ne; ++e) {
      momentum_element(e, u, d, params, false, ke, re);
      scatter(e, re);
    }
  } else {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t e = 0; e < ne; ++e) {
      momentum_element(e, u, d, params, false, ke8_[e], re8_[e]);
    }
    for (std::ptrdiff_t e = 0; e < ne; ++e) scatter(e, re8_[e]);
  }
  if (traction != nullptr) add_traction(*traction, residual);
  return residual;
}

GlobalSystem Assembler::assemble_evolution(const Eigen::VectorXd& d,
                                           const Eigen::VectorXd& d_prev,
                                           std::span<const GaussPointState> gp,
                                           const MaterialParams& params,
                                           std::span<const double> extra, Exec exec) {
  if (gp.size() != num_gauss_points() || (!extra.empty() && extra.size() != gp.size())) {
    throw std::invalid_argument("Gauss-point arrays do not match the mesh");
  }
  const auto ne = static_cast<std::ptrdiff_t>(mesh_.num_elements());
  GlobalSystem sys;
  sys.residual = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_nodes()));
  sys.stiffness = d_pattern_.matrix;
  double* values = sys.stiffness.valuePtr();

  auto scatter = [&](std::size_t e, const Mat4& ke, const Vec4& re) {
    const auto& el = mesh_.elements[e];
    const int* map = &d_pattern_.scatter[e * 16];
    for (int a = 0; a < 4; ++a) {
      sys.residual[el.nodes[a]] += re[a];
      for (int b = 0; b < 4; ++b) values[map[a * 4 + b]] += ke(a, b);
    }
  };

  if (exec == Exec::serial) {
    Mat4 ke;
    Vec4 re;
    for (std::ptrdiff_t e = 0; e < ne; ++e) {
      evolution_element(e, d, d_prev, gp, params, extra, true, ke, re);
      scatter(e, ke, re);
    }
  } else {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t e = 0; e < ne; ++e) {
      evolution_element(e, d, d_prev, gp, params, extra, true, ke4_[e], re4_[e]);
    }
    for (std::ptrdiff_t e = 0; e < ne; ++e) scatter(e, ke4_[e], re4_[e]);
  }
  return sys;
}

Eigen::VectorXd Assembler::evolution_residual(const Eigen::VectorXd& d,
                                              const Eigen::VectorXd& d_prev,
                                              std::span<const GaussPointState> gp,
                                              const MaterialParams& params, Exec exec) {
  if (gp.size() != num_gauss_points()) {
    throw std::invalid_argument("Gauss-point array does not match the mesh");
  }
  const auto ne = static_cast<std::ptrdiff_t>(mesh_.num_elements());
  Eigen::VectorXd residual = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_nodes()));
  auto scatter = [&](std::size_t e, const Vec4& re) {
    const auto& el = mesh_.elements[e];
    for (int a = 0; a < 4; ++a) residual[el.nodes[a]] += re[a];
  };
  if (exec == Exec::serial) {
    Mat4 ke;
    Vec4 re;
    for (std::ptrdiff_t e = 0; e < ne; ++e) {
      evolution_element(e, d, d_prev, gp, params, {}, false, ke, re);
      scatter(e, re);
    }
  } else {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t e = 0; e < ne; ++e) {
      evolution_element(e, d, d_prev, gp, params, {}, false, ke4_[e], re4_[e]);
    }
    for (std::ptrdiff_t e = 0; e < ne; ++e) scatter(e, re4_[e]);
  }
  return residual;
}

double Assembler::evolution_energy(const Eigen::VectorXd& d, const Eigen::VectorXd& d_prev,
                                   std::span<const GaussPointState> gp,
                                   const MaterialParams& params, Exec exec) {
  if (gp.size() != num_gauss_points()) {
    throw std::invalid_argument("Gauss-point array does not match the mesh");
  }
  const double cw = params.c_w();
  const double source = params.g_c / (cw * params.length_l);
  const double diffusion = params.g_c * params.length_l / cw;
  const double gamma = params.gamma();
  const bool at2 = params.at_model == AtModel::AT2;
  const auto ne = static_cast<std::ptrdiff_t>(mesh_.num_elements());
  auto kernel = [&](std::ptrdiff_t e) {
    const auto& el = mesh_.elements[e];
    double sum = 0.0;
    for (int q = 0; q < kGauss; ++q) {
      const auto& p = qp_[e][q];
      double dq = 0, dpq = 0, gx = 0, gy = 0;
      for (int a = 0; a < 4; ++a) {
        const double da = d[el.nodes[a]];
        dq += p.n[a] * da;
        dpq += p.n[a] * d_prev[el.nodes[a]];
        gx += p.dndx[a] * da;
        gy += p.dndy[a] * da;
      }
      const double drop = std::min(dq - dpq, 0.0);
      sum += p.w * ((1.0 - dq) * (1.0 - dq) * gp[e * kGauss + q].psi_plus +
                    source * (at2 ? dq * dq : dq) + 0.5 * gamma * drop * drop +
                    diffusion * (gx * gx + gy * gy));
    }
    scalar_[e] = sum;
  };
  if (exec == Exec::serial) {
    for (std::ptrdiff_t e = 0; e < ne; ++e) kernel(e);
  } else {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t e = 0; e < ne; ++e) kernel(e);
  }
  double total = 0.0;
  for (std::ptrdiff_t e = 0; e < ne; ++e) total += scalar_[e];
  return total;
}

void Assembler::update_gauss_points(const Eigen::VectorXd& u, const MaterialParams& params,
                                    std::span<GaussPointState> gp, Exec exec) const {
  if (gp.size() != num_gauss_points()) {
    throw std::invalid_argument("Gauss-point array does not match the mesh");
  }
  const auto ne = static_cast<std::ptrdiff_t>(mesh_.num_elements());
  auto kernel = [&](std::ptrdiff_t e) {
    for (int q = 0; q < kGauss; ++q) {
      const StrainState s = strain(u, e, q);
      auto& g = gp[e * kGauss + q];
      g.tr_plus = macaulay(s.tr_eps, MacaulaySign::plus);
      g.dev_dot_dev = s.dev_dot_dev;
      g.psi_plus = active_energy(g.tr_plus, g.dev_dot_dev, params);
    }
  };
  if (exec == Exec::serial) {
    for (std::ptrdiff_t e = 0; e < ne; ++e) kernel(e);
  } else {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t e = 0; e < ne; ++e) kernel(e);
  }
}

double Assembler::reaction_force(const Eigen::VectorXd& u, const Eigen::VectorXd& d,
                                 const MaterialParams& params, std::span<const Index> nodes,
                                 int component, Exec exec) {
  const Eigen::VectorXd f = momentum_residual(u, d, params, nullptr, exec);
  double sum = 0.0;
  for (Index n : nodes) sum += f[2 * n + component];
  return sum;
}

std::vector<DirichletDof> dirichlet_dofs(const Mesh& mesh, std::span<const Index> nodes,
                                         int dofs_per_node, int component, double increment) {
  std::vector<DirichletDof> out;
  out.reserve(nodes.size());
  for (Index n : nodes) {
    if (n < 0 || static_cast<std::size_t>(n) >= mesh.num_nodes()) {
      throw std::out_of_range("Dirichlet node " + std::to_string(n) + " is not in the mesh");
    }
    out.push_back({n * dofs_per_node + component, increment});
  }
  return out;
}

void apply_dirichlet(SparseMatrix& a, Eigen::VectorXd& b, std::span<const DirichletDof> dofs) {
  const Eigen::Index n = a.rows();
  std::vector<char> fixed(n, 0);
  Eigen::VectorXd value = Eigen::VectorXd::Zero(n);
  for (const auto& c : dofs) {
    if (c.dof < 0 || c.dof >= n) throw std::out_of_range("Dirichlet dof outside the system");
    fixed[c.dof] = 1;
    value[c.dof] = c.increment;
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  for (Eigen::Index col = 0; col < a.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
      const auto row = it.row();
      if (row == col) {
        diag[col] = it.value();
        if (fixed[col]) continue;
      }
      if (fixed[col] && !fixed[row]) b[row] -= it.value() * value[col];
      if (fixed[col] || fixed[row]) it.valueRef() = 0.0;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!fixed[i]) continue;
    double scale = diag[i];
    if (scale <= 0.0) {
      scale = 1.0;
      a.coeffRef(i, i) = 1.0;
    }
    b[i] = scale * value[i];
  }
}

double max_asymmetry(const SparseMatrix& a) {
  const SparseMatrix diff = SparseMatrix(a.transpose()) - a;
  double scale = 0.0;
  for (Eigen::Index k = 0; k < a.nonZeros(); ++k) scale = std::max(scale, std::abs(a.valuePtr()[k]));
  double worst = 0.0;
  for (Eigen::Index k = 0; k < diff.nonZeros(); ++k) {
    worst = std::max(worst, std::abs(diff.valuePtr()[k]));
  }
  return scale > 0.0 ? worst / scale : worst;
}

}  // namespace pff
