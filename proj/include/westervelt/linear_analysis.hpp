#pragma once

#include "westervelt/grid.hpp"
#include "westervelt/physics.hpp"
#include "westervelt/types.hpp"

namespace westervelt {

/// Linearization of the first-order system at the equilibrium (r, 0).
///
/// `full` holds the 2N x 2N stacked form: u-rows map to v, interior v-rows
/// to (lap u + beta lap v)/c_r^2, and boundary v-rows hold the linearized
/// boundary constraint D_nu u + beta D_nu v + c_r v (= 0 on the domain).
/// Since the constraint rows carry no time derivative the pencil is
/// differential-algebraic; `reduced` is the standard-eigenproblem matrix on
/// (u at all nodes, v at interior nodes) obtained by eliminating boundary v
/// through the constraint, and `elim` recovers boundary v from that reduced
/// vector.
struct LinearizedOperator {
  double r;
  double cr_value;
  PhysicalParams params;
  Grid grid;
  SparseMatrix full;  // 2N x 2N
  Matrix reduced;     // (N + #interior) square
  Matrix elim;        // #boundary x (N + #interior)

  int reduced_dim() const { return static_cast<int>(reduced.rows()); }
};

LinearizedOperator assemble_a0(double r, const Grid& grid, const PhysicalParams& params);

/// Embeds a reduced vector z = (u, v_interior) into the stacked (u, v) pair,
/// filling boundary v from the constraint elimination.
std::pair<Vector, Vector> expand_reduced(const LinearizedOperator& op, const Vector& z);

/// Stacks (u, v_interior) into a reduced vector.
Vector restrict_to_reduced(const LinearizedOperator& op, const Vector& u, const Vector& v);

/// Largest singular value of the reduced matrix (the scale used by the
/// zero-cluster and rank tolerances).
double operator_norm(const LinearizedOperator& op);

/// Eigenvalues of the reduced matrix. Throws EigensolverFailure if the QR
/// iteration does not converge.
ComplexVector spectrum(const LinearizedOperator& op);

struct SemisimplicityReport {
  int kernel_dim = 0;
  int zero_algebraic_multiplicity = 0;
  bool semisimple = false;
  double jordan_probe_residual = 0.0;  // relative LS residual of A0 w = (1, 0)
  double sigma_max = 0.0;
  Vector kernel_vector;  // reduced-space unit vector of the smallest singular value
};

/// Rank/eigenvalue cross-check of the zero eigenvalue. Singular values and
/// eigenvalues below 1e-10 * sigma_max count as zero; a singular value
/// within 10x of that tolerance raises RankToleranceAmbiguous.
SemisimplicityReport kernel_and_semisimplicity(const LinearizedOperator& op);

struct ProjectionResult {
  double k;               // (c_r Int h + Int_bnd g) / |boundary|
  Vector projected_g;     // P(g,h) = (k, 0)
  Vector projected_h;
  Vector complement_g;    // (I-P)(g,h) = (g - k, h)
  Vector complement_h;
};

/// Spectral projection onto the kernel of A0 along (the discrete surrogate
/// of) its range, computed by quadrature.
ProjectionResult range_projection(const Vector& g, const Vector& h,
                                  const LinearizedOperator& op);

struct SolvabilityResult {
  bool solvable = false;
  double residual = 0.0;             // relative least-squares residual
  double compatibility_value = 0.0;  // c_r Int h + Int_bnd g
  double scale = 0.0;                // norm of (g, h)
  bool functional_says_solvable = false;
  bool borderline = false;  // |compatibility| within 10x of its tolerance
};

/// Least-squares solvability of A0 w = (g, h) cross-checked against the
/// quadrature compatibility functional.
SolvabilityResult range_solvability_test(const Vector& g, const Vector& h,
                                         const LinearizedOperator& op, double tol_range = 1e-8);

}  // namespace westervelt
