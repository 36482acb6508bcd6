#include "westervelt/linear_analysis.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "westervelt/errors.hpp"
#include "westervelt/operators.hpp"

namespace westervelt {

LinearizedOperator assemble_a0(double r, const Grid& grid, const PhysicalParams& params) {
  const Equilibrium eq(r, params);  // validates |r| < threshold
  const double cr_val = cr(r, params);
  const double cr2 = coefficient(r, params);
  const int N = grid.num_nodes();
  const int ni = static_cast<int>(grid.interior.size());
  const int nb = static_cast<int>(grid.boundary.size());
  if (N + ni > 4096)
    throw ConfigError("grid has " + std::to_string(N + ni) +
                      " reduced unknowns; dense linear analysis is capped at 4096");

  const SparseMatrix L = laplacian(grid);
  const SparseMatrix D = normal_derivative(grid);

  std::vector<Triplet> trip;
  for (int i = 0; i < N; ++i) trip.emplace_back(i, N + i, 1.0);
  for (int col = 0; col < L.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(L, col); it; ++it) {
      const int i = static_cast<int>(it.row());
      trip.emplace_back(N + i, col, it.value() / cr2);
      trip.emplace_back(N + i, N + col, params.beta * it.value() / cr2);
    }
  }
  for (int col = 0; col < D.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(D, col); it; ++it) {
      const int b = static_cast<int>(it.row());
      trip.emplace_back(N + b, col, it.value());
      trip.emplace_back(N + b, N + col, params.beta * it.value());
    }
  }
  for (int b : grid.boundary) trip.emplace_back(N + b, N + b, cr_val);

  LinearizedOperator op{r, cr_val, params, grid, SparseMatrix(2 * N, 2 * N), Matrix(), Matrix()};
  op.full.setFromTriplets(trip.begin(), trip.end());
  op.full.makeCompressed();

  // Eliminate boundary v from the constraint rows. Column order of the
  // reduced unknown z is (u_0..u_{N-1}, v at interior nodes in grid order).
  const Matrix Dd = Matrix(D);
  Matrix c_u(nb, N), c_vi(nb, ni), c_vb(nb, nb);
  for (int kb = 0; kb < nb; ++kb) {
    const int b = grid.boundary[kb];
    c_u.row(kb) = Dd.row(b);
    for (int ki = 0; ki < ni; ++ki) c_vi(kb, ki) = params.beta * Dd(b, grid.interior[ki]);
    for (int kb2 = 0; kb2 < nb; ++kb2) c_vb(kb, kb2) = params.beta * Dd(b, grid.boundary[kb2]);
    c_vb(kb, kb) += cr_val;
  }
  Eigen::FullPivLU<Matrix> lu(c_vb);
  if (!lu.isInvertible())
    throw SolverError("boundary block of the linearized constraint is singular");
  Matrix rhs(nb, N + ni);
  rhs.leftCols(N) = c_u;
  rhs.rightCols(ni) = c_vi;
  op.elim = -lu.solve(rhs);

  // Dynamic rows: u-rows for every node, then v-rows for interior nodes.
  const Matrix Ld = Matrix(L);
  op.reduced = Matrix::Zero(N + ni, N + ni);
  for (int j = 0; j < N; ++j) {
    const int kb = grid.boundary_pos[j];
    if (kb < 0) {
      // interior: udot_j = v_j
      int ki = 0;
      while (grid.interior[ki] != j) ++ki;
      op.reduced(j, N + ki) = 1.0;
    } else {
      op.reduced.row(j) = op.elim.row(kb);
    }
  }
  for (int ki = 0; ki < ni; ++ki) {
    const int i = grid.interior[ki];
    auto row = op.reduced.row(N + ki);
    row.head(N) = Ld.row(i) / cr2;
    for (int kj = 0; kj < ni; ++kj)
      row(N + kj) += params.beta * Ld(i, grid.interior[kj]) / cr2;
    for (int kb = 0; kb < nb; ++kb) {
      const double a = params.beta * Ld(i, grid.boundary[kb]) / cr2;
      if (a != 0.0) row += a * op.elim.row(kb);
    }
  }
  return op;
}

std::pair<Vector, Vector> expand_reduced(const LinearizedOperator& op, const Vector& z) {
  const int N = op.grid.num_nodes();
  Vector u = z.head(N);
  Vector v = Vector::Zero(N);
  const int ni = static_cast<int>(op.grid.interior.size());
  for (int ki = 0; ki < ni; ++ki) v[op.grid.interior[ki]] = z[N + ki];
  const Vector vb = op.elim * z;
  for (size_t kb = 0; kb < op.grid.boundary.size(); ++kb)
    v[op.grid.boundary[kb]] = vb[static_cast<Eigen::Index>(kb)];
  return {std::move(u), std::move(v)};
}

Vector restrict_to_reduced(const LinearizedOperator& op, const Vector& u, const Vector& v) {
  const int N = op.grid.num_nodes();
  const int ni = static_cast<int>(op.grid.interior.size());
  Vector z(N + ni);
  z.head(N) = u;
  for (int ki = 0; ki < ni; ++ki) z[N + ki] = v[op.grid.interior[ki]];
  return z;
}

double operator_norm(const LinearizedOperator& op) {
  Eigen::BDCSVD<Matrix> svd(op.reduced);
  return svd.singularValues()[0];
}

ComplexVector spectrum(const LinearizedOperator& op) {
  Eigen::EigenSolver<Matrix> es(op.reduced, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw EigensolverFailure("QR eigensolver did not converge on the reduced matrix");
  return es.eigenvalues();
}

SemisimplicityReport kernel_and_semisimplicity(const LinearizedOperator& op) {
  SemisimplicityReport rep;
  Eigen::BDCSVD<Matrix> svd(op.reduced, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);  // rank tolerance, relative to sigma_max
  const Vector sv = svd.singularValues();
  rep.sigma_max = sv[0];
  const double tol = 1e-10 * rep.sigma_max;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv[i] >= tol && sv[i] < 10.0 * tol)
      throw RankToleranceAmbiguous("singular value " + std::to_string(sv[i]) +
                                   " lies in the ambiguity band around the rank tolerance " +
                                   std::to_string(tol));
    if (sv[i] < tol) ++rep.kernel_dim;
  }
  rep.kernel_vector = svd.matrixV().col(sv.size() - 1);

  const ComplexVector ev = spectrum(op);
  for (int i = 0; i < ev.size(); ++i)
    if (std::abs(ev[i]) < tol) ++rep.zero_algebraic_multiplicity;
  rep.semisimple = (rep.kernel_dim == rep.zero_algebraic_multiplicity);

  // Jordan-chain probe: A0 w = (1, 0) must be inconsistent.
  const int N = op.grid.num_nodes();
  Vector b = Vector::Zero(op.reduced_dim());
  b.head(N).setOnes();
  const Vector x = svd.solve(b);
  rep.jordan_probe_residual = (op.reduced * x - b).norm() / b.norm();
  return rep;
}

ProjectionResult range_projection(const Vector& g, const Vector& h,
                                  const LinearizedOperator& op) {
  const Vector ones = Vector::Ones(op.grid.boundary.size());
  const double bnd_measure = boundary_integral(op.grid, ones);
  const double k = (op.cr_value * interior_integral(op.grid, h) +
                    boundary_integral(op.grid, restrict_to_boundary(op.grid, g))) /
                   bnd_measure;
  ProjectionResult out;
  out.k = k;
  out.projected_g = Vector::Constant(g.size(), k);
  out.projected_h = Vector::Zero(h.size());
  out.complement_g = g.array() - k;
  out.complement_h = h;
  return out;
}

SolvabilityResult range_solvability_test(const Vector& g, const Vector& h,
                                         const LinearizedOperator& op, double tol_range) {
  const int N = op.grid.num_nodes();
  const int ni = static_cast<int>(op.grid.interior.size());
  Vector b(N + ni);
  b.head(N) = g;
  for (int ki = 0; ki < ni; ++ki) b[N + ki] = h[op.grid.interior[ki]];

  SolvabilityResult out;
  out.compatibility_value = op.cr_value * interior_integral(op.grid, h) +
                            boundary_integral(op.grid, restrict_to_boundary(op.grid, g));
  out.scale = std::sqrt(g.squaredNorm() + h.squaredNorm());

  const double bn = b.norm();
  if (bn == 0.0) {
    out.solvable = true;
    out.residual = 0.0;
    out.functional_says_solvable = true;
    return out;
  }
  Eigen::BDCSVD<Matrix> svd(op.reduced, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);  // keep near-kernel directions out of the solve
  const Vector x = svd.solve(b);
  out.residual = (op.reduced * x - b).norm() / bn;
  out.solvable = out.residual < tol_range;
  const double ftol = 1e-8 * out.scale;
  out.functional_says_solvable = std::abs(out.compatibility_value) < ftol;
  out.borderline = !out.functional_says_solvable && std::abs(out.compatibility_value) < 10.0 * ftol;
  return out;
}

}  // namespace westervelt
