#include "westervelt/operators.hpp"

#include <vector>

namespace westervelt {

SparseMatrix laplacian(const Grid& grid) {
  const int N = grid.num_nodes();
  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(grid.interior.size()) * 5);
  const double ax = 1.0 / (grid.h[0] * grid.h[0]);
  if (grid.dim == 1) {
    for (int i : grid.interior) {
      trip.emplace_back(i, i - 1, ax);
      trip.emplace_back(i, i, -2.0 * ax);
      trip.emplace_back(i, i + 1, ax);
    }
  } else {
    const int nx = grid.n[0];
    const double ay = 1.0 / (grid.h[1] * grid.h[1]);
    for (int i : grid.interior) {
      trip.emplace_back(i, i - nx, ay);
      trip.emplace_back(i, i - 1, ax);
      trip.emplace_back(i, i, -2.0 * ax - 2.0 * ay);
      trip.emplace_back(i, i + 1, ax);
      trip.emplace_back(i, i + nx, ay);
    }
  }
  SparseMatrix L(N, N);
  L.setFromTriplets(trip.begin(), trip.end());
  L.makeCompressed();
  return L;
}

SparseMatrix normal_derivative(const Grid& grid) {
  const int N = grid.num_nodes();
  std::vector<Triplet> trip;
  trip.reserve(grid.boundary.size() * 6);
  for (size_t k = 0; k < grid.boundary.size(); ++k) {
    const int b = grid.boundary[k];
    for (const FaceContribution& f : grid.faces[k]) {
      const double s = f.weight / (2.0 * grid.h[f.axis]);
      const int stride = (f.axis == 0) ? 1 : grid.n[0];
      const int in = (f.sign < 0) ? stride : -stride;  // one step into the domain
      trip.emplace_back(b, b, 3.0 * s);
      trip.emplace_back(b, b + in, -4.0 * s);
      trip.emplace_back(b, b + 2 * in, s);
    }
  }
  SparseMatrix D(N, N);
  D.setFromTriplets(trip.begin(), trip.end());
  D.makeCompressed();
  return D;
}

}  // namespace westervelt
