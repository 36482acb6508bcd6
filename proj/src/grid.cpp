#include "westervelt/grid.hpp"

#include <string>

#include "westervelt/errors.hpp"

namespace westervelt {

double Grid::domain_measure() const {
  double m = hi[0] - lo[0];
  if (dim == 2) m *= hi[1] - lo[1];
  return m;
}

double Grid::boundary_measure() const {
  if (dim == 1) return 2.0;  // counting measure on the two endpoints
  return 2.0 * ((hi[0] - lo[0]) + (hi[1] - lo[1]));
}

Grid build_grid(int dim, std::array<double, 2> lo, std::array<double, 2> hi,
                std::array<int, 2> n) {
  std::vector<std::string> bad;
  if (dim != 1 && dim != 2) bad.push_back("dim must be 1 or 2, got " + std::to_string(dim));
  const int axes = (dim == 2) ? 2 : 1;
  for (int a = 0; a < axes; ++a) {
    if (n[a] < 3)
      bad.push_back("need at least 3 nodes per axis, got n[" + std::to_string(a) + "] = " +
                    std::to_string(n[a]));
    if (!(hi[a] > lo[a]))
      bad.push_back("degenerate extent on axis " + std::to_string(a));
  }
  if (!bad.empty()) throw ConfigError(bad);

  Grid g;
  g.dim = dim;
  g.lo = lo;
  g.hi = hi;
  g.n = n;
  if (dim == 1) {
    g.n[1] = 1;
    g.hi[1] = g.lo[1] = 0.0;
  }
  g.h[0] = (g.hi[0] - g.lo[0]) / (g.n[0] - 1);
  g.h[1] = dim == 2 ? (g.hi[1] - g.lo[1]) / (g.n[1] - 1) : 0.0;

  const int N = g.num_nodes();
  g.boundary_pos.assign(N, -1);
  g.node_weight = Vector::Zero(N);

  if (dim == 1) {
    const int nx = g.n[0];
    for (int i = 0; i < nx; ++i) g.node_weight[i] = g.h[0];
    g.node_weight[0] *= 0.5;
    g.node_weight[nx - 1] *= 0.5;
    g.boundary = {0, nx - 1};
    g.faces = {{{0, -1, 1.0}}, {{0, +1, 1.0}}};
    g.boundary_weight = Vector::Ones(2);
    for (int i = 1; i < nx - 1; ++i) g.interior.push_back(i);
  } else {
    const int nx = g.n[0], ny = g.n[1];
    const double hx = g.h[0], hy = g.h[1];
    for (int iy = 0; iy < ny; ++iy) {
      const double wy = (iy == 0 || iy == ny - 1) ? hy / 2 : hy;
      for (int ix = 0; ix < nx; ++ix) {
        const double wx = (ix == 0 || ix == nx - 1) ? hx / 2 : hx;
        g.node_weight[g.node_id(ix, iy)] = wx * wy;
      }
    }
    std::vector<double> bw;
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < nx; ++ix) {
        std::vector<FaceContribution> f;
        if (ix == 0) f.push_back({0, -1, 1.0});
        if (ix == nx - 1) f.push_back({0, +1, 1.0});
        if (iy == 0) f.push_back({1, -1, 1.0});
        if (iy == ny - 1) f.push_back({1, +1, 1.0});
        const int id = g.node_id(ix, iy);
        if (f.empty()) {
          g.interior.push_back(id);
          continue;
        }
        if (f.size() == 2)
          for (auto& fc : f) fc.weight = 0.5;
        const bool x_edge = (iy == 0 || iy == ny - 1);  // runs along x
        const bool y_edge = (ix == 0 || ix == nx - 1);
        double w = 0.0;
        if (x_edge) w += y_edge ? hx / 2 : hx;
        if (y_edge) w += x_edge ? hy / 2 : hy;
        g.boundary.push_back(id);
        g.faces.push_back(std::move(f));
        bw.push_back(w);
      }
    }
    g.boundary_weight = Eigen::Map<Vector>(bw.data(), static_cast<Eigen::Index>(bw.size()));
  }

  for (size_t k = 0; k < g.boundary.size(); ++k) g.boundary_pos[g.boundary[k]] = static_cast<int>(k);
  return g;
}

double interior_integral(const Grid& grid, const Vector& field) {
  if (field.size() != grid.num_nodes())
    throw ConfigError("interior_integral: field length " + std::to_string(field.size()) +
                      " does not match node count " + std::to_string(grid.num_nodes()));
  return grid.node_weight.dot(field);
}

double boundary_integral(const Grid& grid, const Vector& boundary_field) {
  if (boundary_field.size() != static_cast<Eigen::Index>(grid.boundary.size()))
    throw ConfigError("boundary_integral: field length " + std::to_string(boundary_field.size()) +
                      " does not match boundary node count " + std::to_string(grid.boundary.size()));
  return grid.boundary_weight.dot(boundary_field);
}

Vector restrict_to_boundary(const Grid& grid, const Vector& nodal_field) {
  Vector out(grid.boundary.size());
  for (size_t k = 0; k < grid.boundary.size(); ++k) out[k] = nodal_field[grid.boundary[k]];
  return out;
}

}  // namespace westervelt
