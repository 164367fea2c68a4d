#include "pff/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pff {

const std::vector<Index>& Mesh::select_boundary(std::string_view tag) const {
  auto it = boundary_sets.find(tag);
  if (it == boundary_sets.end()) {
    throw std::out_of_range("unknown boundary tag '" + std::string(tag) + "'");
  }
  return it->second;
}

bool Mesh::has_boundary(std::string_view tag) const {
  return boundary_sets.find(tag) != boundary_sets.end();
}

Mesh build_line_mesh(int n_elems, double length) {
  if (n_elems < 2) throw std::invalid_argument("line mesh needs at least 2 elements");
  if (!(length > 0.0)) throw std::invalid_argument("line mesh length must be positive");

  Mesh mesh;
  mesh.kind = CellKind::Line2;
  const double h = length / n_elems;
  for (Index i = 0; i <= n_elems; ++i) {
    // Last node pinned to `length` so the right end is exact.
    const double x = (i == n_elems) ? length : i * h;
    mesh.nodes.push_back({i, {x, 0.0}});
  }
  for (Index e = 0; e < n_elems; ++e) {
    mesh.elements.push_back({e, {e, e + 1, -1, -1}});
  }
  mesh.boundary_sets["left"] = {0};
  mesh.boundary_sets["right"] = {n_elems};
  return mesh;
}

Mesh build_notched_square(int nx, int ny, double side, bool notch_from_left_to_center) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("notched square needs nx, ny >= 1");
  if (!(side > 0.0)) throw std::invalid_argument("side must be positive");
  if (notch_from_left_to_center && (nx % 2 != 0 || ny % 2 != 0)) {
    throw std::invalid_argument("nx and ny must be even so the notch lies on element edges");
  }

  Mesh mesh;
  mesh.kind = CellKind::Quad4;
  const double hx = side / nx;
  const double hy = side / ny;
  auto grid_id = [nx](int i, int j) { return static_cast<Index>(j * (nx + 1) + i); };
  auto coord = [side](int i, int n, double h) { return i == n ? side : i * h; };

  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      mesh.nodes.push_back({grid_id(i, j), {coord(i, nx, hx), coord(j, ny, hy)}});
    }
  }

  // Duplicates for the notch line: row ny/2, columns 0 .. nx/2 - 1 (the tip
  // at the centre stays shared).
  std::vector<Index> upper_copy(mesh.nodes.size(), -1);
  if (notch_from_left_to_center) {
    NotchSpec notch;
    notch.polyline = {{0.0, side / 2}, {side / 2, side / 2}};
    const int jm = ny / 2;
    for (int i = 0; i < nx / 2; ++i) {
      const Index below = grid_id(i, jm);
      const Index above = static_cast<Index>(mesh.nodes.size());
      mesh.nodes.push_back({above, mesh.nodes[below].x});
      upper_copy[below] = above;
      notch.duplicated.emplace_back(below, above);
    }
    mesh.notch = std::move(notch);
  }

  const int jm = ny / 2;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      std::array<Index, 4> n{grid_id(i, j), grid_id(i + 1, j), grid_id(i + 1, j + 1),
                             grid_id(i, j + 1)};
      if (notch_from_left_to_center && j == jm) {
        // Element sits directly above the notch line: swap in the upper copies.
        for (int a : {0, 1}) {
          if (upper_copy[n[a]] >= 0) n[a] = upper_copy[n[a]];
        }
      }
      mesh.elements.push_back({static_cast<Index>(mesh.elements.size()), n});
    }
  }

  auto& top = mesh.boundary_sets["top"];
  auto& bottom = mesh.boundary_sets["bottom"];
  auto& left = mesh.boundary_sets["left"];
  auto& right = mesh.boundary_sets["right"];
  for (const auto& node : mesh.nodes) {
    if (node.x[1] == side) top.push_back(node.id);
    if (node.x[1] == 0.0) bottom.push_back(node.id);
    if (node.x[0] == 0.0) left.push_back(node.id);
    if (node.x[0] == side) right.push_back(node.id);
  }
  return mesh;
}

namespace {

int divisions(double length, double h, const char* what) {
  const double ratio = length / h;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio) {
    throw std::invalid_argument(std::string("element size does not divide the ") + what);
  }
  return static_cast<int>(rounded);
}

}  // namespace

Mesh build_lshape_mesh(double h, const LShapeGeometry& g) {
  if (!(h > 0.0)) throw std::invalid_argument("element size must be positive");
  if (!(g.cutout > 0.0 && g.cutout < g.size)) throw std::invalid_argument("invalid L-panel cutout");
  const int n_cut = divisions(g.cutout, h, "cutout");
  const int n_arm = divisions(g.size - g.cutout, h, "panel arm");
  const int n = n_cut + n_arm;
  const double step = g.size / n;

  // The removed block spans columns i >= i_cut and rows j < n_cut.
  const int i_cut = n - n_cut;
  auto node_inside = [&](int i, int j) { return !(i > i_cut && j < n_cut); };
  auto cell_inside = [&](int i, int j) { return !(i >= i_cut && j < n_cut); };

  Mesh mesh;
  mesh.kind = CellKind::Quad4;
  std::vector<Index> id((n + 1) * (n + 1), -1);
  auto at = [n](int i, int j) { return j * (n + 1) + i; };
  auto coord = [&](int i) { return i == n ? g.size : i * step; };
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      if (!node_inside(i, j)) continue;
      const auto nid = static_cast<Index>(mesh.nodes.size());
      id[at(i, j)] = nid;
      mesh.nodes.push_back({nid, {coord(i), coord(j)}});
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (!cell_inside(i, j)) continue;
      mesh.elements.push_back({static_cast<Index>(mesh.elements.size()),
                               {id[at(i, j)], id[at(i + 1, j)], id[at(i + 1, j + 1)],
                                id[at(i, j + 1)]}});
    }
  }

  const double tol = 1e-9 * g.size;
  auto& clamp = mesh.boundary_sets["bottom_clamp"];
  auto& load = mesh.boundary_sets["load_zone"];
  auto& pinned = mesh.boundary_sets["no_damage"];
  auto& left = mesh.boundary_sets["left"];
  auto& top = mesh.boundary_sets["top"];
  for (const auto& node : mesh.nodes) {
    const double x = node.x[0];
    const double y = node.x[1];
    if (std::abs(y) < tol) clamp.push_back(node.id);
    if (std::abs(y - g.cutout) < tol && x >= g.size - g.load_length - tol) load.push_back(node.id);
    if (x >= g.size - g.pin_width - tol && y <= g.cutout + g.pin_height + tol) {
      pinned.push_back(node.id);
    }
    if (std::abs(x) < tol) left.push_back(node.id);
    if (std::abs(y - g.size) < tol) top.push_back(node.id);
  }
  return mesh;
}

double jacobian_determinant(const Mesh& mesh, std::size_t e, double xi, double eta) {
  const auto& el = mesh.elements.at(e);
  if (mesh.kind == CellKind::Line2) {
    return 0.5 * (mesh.nodes[el.nodes[1]].x[0] - mesh.nodes[el.nodes[0]].x[0]);
  }
  const std::array<double, 4> dxi{-(1 - eta) / 4, (1 - eta) / 4, (1 + eta) / 4, -(1 + eta) / 4};
  const std::array<double, 4> deta{-(1 - xi) / 4, -(1 + xi) / 4, (1 + xi) / 4, (1 - xi) / 4};
  double j00 = 0, j01 = 0, j10 = 0, j11 = 0;
  for (int a = 0; a < 4; ++a) {
    const auto& x = mesh.nodes[el.nodes[a]].x;
    j00 += dxi[a] * x[0];
    j01 += dxi[a] * x[1];
    j10 += deta[a] * x[0];
    j11 += deta[a] * x[1];
  }
  return j00 * j11 - j01 * j10;
}

double element_measure(const Mesh& mesh, std::size_t e) {
  const auto& el = mesh.elements.at(e);
  if (mesh.kind == CellKind::Line2) {
    return std::abs(mesh.nodes[el.nodes[1]].x[0] - mesh.nodes[el.nodes[0]].x[0]);
  }
  // Shoelace formula, exact for straight-sided quads.
  double twice = 0.0;
  for (int a = 0; a < 4; ++a) {
    const auto& p = mesh.nodes[el.nodes[a]].x;
    const auto& q = mesh.nodes[el.nodes[(a + 1) % 4]].x;
    twice += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * twice;
}

}  // namespace pff
