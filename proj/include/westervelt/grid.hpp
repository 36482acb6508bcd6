#pragma once

#include <array>
#include <vector>

#include "westervelt/types.hpp"

namespace westervelt {

/// One outward-face contribution to a boundary node's normal.
/// Edge nodes carry a single face with weight 1; corner nodes carry both
/// adjoining faces with weight 1/2 each (averaged normal).
struct FaceContribution {
  int axis;       // 0 = x, 1 = y
  int sign;       // -1 low face, +1 high face
  double weight;  // 1.0 on an edge, 0.5 per face at a corner
};

/// Tensor-product grid on an interval (dim 1) or axis-aligned rectangle
/// (dim 2). Nodes are numbered lexicographically, x fastest.
struct Grid {
  int dim = 1;
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{1.0, 0.0};
  std::array<int, 2> n{0, 1};  // nodes per axis; n[1] == 1 in 1D
  std::array<double, 2> h{0.0, 0.0};

  std::vector<int> boundary;  // boundary node ids, ascending
  std::vector<int> interior;  // interior node ids, ascending
  std::vector<std::vector<FaceContribution>> faces;  // parallel to `boundary`
  Vector boundary_weight;  // surface quadrature weight, parallel to `boundary`
  Vector node_weight;      // trapezoidal volume weight per node
  std::vector<int> boundary_pos;  // node id -> index into `boundary`, or -1

  int num_nodes() const { return n[0] * n[1]; }
  int node_id(int ix, int iy = 0) const { return ix + n[0] * iy; }
  double x(int id) const { return lo[0] + (id % n[0]) * h[0]; }
  double y(int id) const { return dim == 2 ? lo[1] + (id / n[0]) * h[1] : 0.0; }
  bool is_boundary(int id) const { return boundary_pos[id] >= 0; }

  double domain_measure() const;
  double boundary_measure() const;
};

/// Builds the grid with its index sets and quadrature weights.
/// Requires n >= 3 nodes per axis and nondegenerate extents.
Grid build_grid(int dim, std::array<double, 2> lo, std::array<double, 2> hi,
                std::array<int, 2> n);

/// Trapezoidal quadrature of a nodal field over the domain.
double interior_integral(const Grid& grid, const Vector& field);

/// Quadrature of a boundary field (indexed like grid.boundary) over the
/// boundary: counting measure in 1D, edge-wise trapezoid with split corner
/// weights in 2D.
double boundary_integral(const Grid& grid, const Vector& boundary_field);

/// Picks the boundary-node values out of a full nodal field.
Vector restrict_to_boundary(const Grid& grid, const Vector& nodal_field);

}  // namespace westervelt
