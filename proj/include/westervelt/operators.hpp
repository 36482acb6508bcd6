#pragma once

#include "westervelt/grid.hpp"
#include "westervelt/types.hpp"

namespace westervelt {

/// Second-order central-difference Laplacian. Rows of boundary nodes are
/// left zero; the boundary-condition assembly owns those equations.
SparseMatrix laplacian(const Grid& grid);

/// Outward normal derivative at the boundary, one-sided second-order
/// 3-point stencils, (-3 f0 + 4 f1 - f2)/(2h) oriented outward. Rows of
/// interior nodes are zero. At 2D corners the node's averaged normal makes
/// the row the mean of the two one-sided edge derivatives.
SparseMatrix normal_derivative(const Grid& grid);

}  // namespace westervelt
