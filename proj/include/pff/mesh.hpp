#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pff {

using Index = int;

/// Coordinates in millimetres. Line meshes keep y = 0.
struct Node {
  Index id = 0;
  std::array<double, 2> x{0.0, 0.0};
};

enum class CellKind { Line2, Quad4 };

/// Counter-clockwise connectivity. Line elements use the first two slots;
/// unused slots hold -1.
struct Element {
  Index id = 0;
  std::array<Index, 4> nodes{-1, -1, -1, -1};
};

/// Straight notch realised by node duplication. Each pair holds the node
/// kept below the notch and its duplicate used by the elements above it.
struct NotchSpec {
  std::vector<std::array<double, 2>> polyline;
  std::vector<std::pair<Index, Index>> duplicated;
};

struct Mesh {
  CellKind kind = CellKind::Quad4;
  std::vector<Node> nodes;
  std::vector<Element> elements;
  std::map<std::string, std::vector<Index>, std::less<>> boundary_sets;
  std::optional<NotchSpec> notch;

  [[nodiscard]] std::size_t num_nodes() const { return nodes.size(); }
  [[nodiscard]] std::size_t num_elements() const { return elements.size(); }
  [[nodiscard]] int nodes_per_element() const { return kind == CellKind::Quad4 ? 4 : 2; }

  /// Throws std::out_of_range for an unknown tag.
  [[nodiscard]] const std::vector<Index>& select_boundary(std::string_view tag) const;
  [[nodiscard]] bool has_boundary(std::string_view tag) const;
};

/// Uniform subdivision of [0, length]; tags "left" and "right".
Mesh build_line_mesh(int n_elems, double length);

/// Square [0, side]^2 with nx x ny quads and, optionally, a horizontal notch
/// running from the left edge at mid-height to the centre. Tags "top",
/// "bottom", "left", "right".
Mesh build_notched_square(int nx, int ny, double side, bool notch_from_left_to_center);

/// Dimensions of the L-shaped panel: a `size` x `size` square with the
/// lower-right `cutout` x `cutout` square removed.
struct LShapeGeometry {
  double size = 500.0;
  double cutout = 250.0;
  /// Length of the loaded segment on the underside of the arm, measured from
  /// the free end.
  double load_length = 30.0;
  /// Damage is pinned to zero inside the box x >= size - pin_width,
  /// y <= cutout + pin_height.
  double pin_width = 60.0;
  double pin_height = 30.0;
};

/// L-panel meshed with square quads of edge h. Tags "bottom_clamp",
/// "load_zone", "no_damage", "left", "top".
Mesh build_lshape_mesh(double h, const LShapeGeometry& geometry = {});

/// Determinant of the isoparametric Jacobian of element `e` at (xi, eta).
double jacobian_determinant(const Mesh& mesh, std::size_t e, double xi, double eta);

/// Exact area (or length for line meshes) of element `e`.
double element_measure(const Mesh& mesh, std::size_t e);

}  // namespace pff
