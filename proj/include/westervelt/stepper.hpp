#pragma once

#include <functional>
#include <string>
#include <vector>

#include "westervelt/grid.hpp"
#include "westervelt/operators.hpp"
#include "westervelt/physics.hpp"
#include "westervelt/types.hpp"

namespace westervelt {

enum class Scheme { backward_euler, tr_bdf2 };

/// Boundary row imposed at boundary nodes. `abc` is the absorbing relation
/// D_nu(u + beta v) + v sqrt(c^-2 - 2 gamma u) = 0; `neumann` drops the
/// impedance term (rigid wall); `dirichlet_v` pins v = 0.
enum class BcVariant { abc, neumann, dirichlet_v };

/// Optional additive forcing: `interior` feeds the momentum rows, `boundary`
/// the boundary-condition rows. Both return full nodal fields sampled at the
/// rows that use them. Used by manufactured-solution studies.
struct SourceTerms {
  std::function<Vector(double)> interior;
  std::function<Vector(double)> boundary;
};

struct StepperConfig {
  double dt = 0.01;
  Scheme scheme = Scheme::tr_bdf2;
  double newton_tol = 1e-10;  // residual sup-norm tolerance
  int newton_max_iter = 12;
  double eps_deg = -1.0;  // degeneracy floor; < 0 selects default_eps_deg(params)

  double floor(const PhysicalParams& p) const {
    return eps_deg < 0.0 ? default_eps_deg(p) : eps_deg;
  }
};

/// A discretized initial boundary value problem: parameters, grid, the two
/// spatial operators, the boundary-condition variant and optional forcing.
/// Immutable after construction; safe to share across concurrent runs.
struct Problem {
  PhysicalParams params;
  Grid grid;
  SparseMatrix lap;
  SparseMatrix dnu;
  BcVariant bc = BcVariant::abc;
  SourceTerms source;

  Problem(const PhysicalParams& p, Grid g)
      : params(p), grid(std::move(g)), lap(laplacian(grid)), dnu(normal_derivative(grid)) {}
};

/// One implicit stage in residual form. Every scheme step is a root-find of
///   u-rows:            inv_tau*u - theta*v - rhs_u = 0
///   v-rows (interior): coeff(u)*(inv_tau*v - rhs_v)
///                        - theta*(lap u + beta lap v + 2 gamma v^2 + f) = 0
///   v-rows (boundary): boundary relation at t_stage minus g.
/// Backward Euler is the single stage theta = 1, inv_tau = 1/dt; TR-BDF2
/// composes a trapezoidal stage (theta = 1/2) with a BDF2 stage.
struct StageSystem {
  double inv_tau;
  double theta;
  Vector rhs_u;
  Vector rhs_v;
  double t_stage;
  Vector f;  // interior forcing at t_stage (full nodal length)
  Vector g;  // boundary forcing at t_stage (full nodal length)
};

StageSystem backward_euler_stage(const Problem& prob, const StepperConfig& cfg,
                                 const State& w_old);
StageSystem trbdf2_first_stage(const Problem& prob, const StepperConfig& cfg,
                               const State& w_old);
StageSystem trbdf2_second_stage(const Problem& prob, const StepperConfig& cfg,
                                const State& w_old, const Vector& u_mid, const Vector& v_mid);

/// Residual of a stage at the iterate (u, v). Length 2N, u-rows first.
Vector stage_residual(const Problem& prob, const StepperConfig& cfg, const StageSystem& st,
                      const Vector& u, const Vector& v);

/// Exact analytic Jacobian of stage_residual with respect to the stacked
/// (u, v) iterate.
SparseMatrix stage_jacobian(const Problem& prob, const StepperConfig& cfg,
                            const StageSystem& st, const Vector& u, const Vector& v);

/// Backward-Euler residual of the step w_old -> w_new (the single-stage
/// relation; TR-BDF2 steps are composed from stage_residual internally).
Vector residual(const Problem& prob, const StepperConfig& cfg, const State& w_new,
                const State& w_old);

/// Jacobian of `residual` with respect to w_new.
SparseMatrix jacobian(const Problem& prob, const StepperConfig& cfg, const State& w_new,
                      const State& w_old);

struct NewtonReport {
  std::vector<double> residual_history;  // sup norms, including the initial guess
  int iterations = 0;
};

/// Advances one full step of the configured scheme via Newton solves with a
/// direct sparse LU per iteration. Initial guess is the previous state (the
/// first-stage result for the BDF2 stage). Throws NewtonDivergence or
/// DegeneracyError.
State newton_step_solve(const Problem& prob, const StepperConfig& cfg, const State& w_old,
                        std::vector<NewtonReport>* reports = nullptr);

struct SeriesSample {
  double t;
  double u_max;
  double u_min;
  double sup_v;
  double bc_residual;  // sup norm of the active boundary relation
  double energy;       // ||v||_2^2 + ||grad u||_2^2
};

enum class RunStatus { completed, degeneracy, newton_divergence };

struct RunResult {
  std::vector<SeriesSample> series;  // includes the initial state
  RunStatus status = RunStatus::completed;
  std::string error_message;
  double fail_time = -1.0;  // time of the last accepted state when failed
  State final_state;        // last accepted state
  long total_newton_iterations = 0;
};

const char* to_string(RunStatus s);

using Observer = std::function<void(const State&, const SeriesSample&)>;

/// Runs from `initial` to t_end. Solver failures abort the run cleanly: the
/// partial series and the failure time are returned rather than thrown.
RunResult simulate(const Problem& prob, const StepperConfig& cfg, const State& initial,
                   double t_end, const Observer& observe = {});

/// Diagnostics of a state under a problem (one series row).
SeriesSample diagnostics(const Problem& prob, const State& w);

/// Discrete energy surrogate ||v||_2^2 + ||grad u||_2^2 (cell-edge gradient).
double energy_surrogate(const Grid& grid, const Vector& u, const Vector& v);

}  // namespace westervelt
