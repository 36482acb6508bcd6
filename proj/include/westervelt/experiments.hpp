#pragma once

#include <map>
#include <string>
#include <vector>

#include "westervelt/grid.hpp"
#include "westervelt/physics.hpp"
#include "westervelt/stepper.hpp"
#include "westervelt/types.hpp"

namespace westervelt {

/// Initial pair (u0, u1) for a run, tagged with the recipe that produced it.
/// Construction rejects data with max|u0| >= threshold.
struct InitialData {
  Vector u0;
  Vector u1;
  std::string recipe;
  std::map<std::string, double> recipe_params;

  InitialData(Vector u0_, Vector u1_, const Grid& grid, const PhysicalParams& params,
              std::string recipe_ = "custom", std::map<std::string, double> prm = {});
};

/// Known recipe ids: "equilibrium" (r_level), "gaussian" (amplitude, center,
/// width, center_y, width_y) with u1 = 0, and "pulse" (1D gaussian paired
/// with u1 = -c * D_x u0 so it travels toward +x).
InitialData make_initial_data(const std::string& recipe,
                              const std::map<std::string, double>& prm, const Grid& grid,
                              const PhysicalParams& params);

/// Boundary field D_nu(u0 + beta u1) + u1 sqrt(c^-2 - 2 gamma u0), indexed
/// like grid.boundary. Zero iff the data are compatible with the absorbing
/// boundary relation at t = 0.
Vector compatibility_residual(const InitialData& data, const PhysicalParams& params,
                              const Grid& grid);

struct EnforcementResult {
  InitialData data;
  double correction_norm = 0.0;  // l2 norm of the u1 change
  double conditioning = 0.0;     // condition number of the collar system
};

/// Minimally adjusts u1 on a two-node-wide boundary collar so the
/// compatibility residual vanishes (within comp_tol); u0 is never touched.
EnforcementResult enforce_compatibility(const InitialData& data, const PhysicalParams& params,
                                        const Grid& grid, double comp_tol = 1e-10);

enum class FitStatus { ok, unreliable };

struct FitResult {
  FitStatus status = FitStatus::unreliable;
  std::string reason;       // set when unreliable
  double r_inf = 0.0;       // spatial mean of u at the final time
  double omega = 0.0;       // fitted decay rate (valid when status == ok)
  double fit_residual = 0.0;  // rms of the log-linear fit
};

/// Fits the exponential decay toward (r_inf, 0): least-squares line through
/// log(sup|u - r_inf| + sup|v|) over the final decade of decay (samples
/// within a factor 3 of the terminal value are excluded as floor noise).
/// Requires sup|v| to have dropped by >= 1e3 from its post-initial peak and
/// the log fit to have rms residual < fit_tol.
FitResult fit_equilibrium_convergence(const RunResult& run, const Grid& grid,
                                      const PhysicalParams& params, double fit_tol = 0.1);

struct PulseConfig {
  double domain_length = 4.0;
  int n = 641;
  double amplitude = 0.02;
  double center = 1.0;
  double width = 0.18;
  double probe_x = 2.8;
};

struct ReflectionResult {
  double incident_amp = 0.0;
  double reflected_amp = 0.0;
  double ratio = 0.0;
};

/// Launches a rightward pulse in 1D, records |u| at the probe before and
/// after the boundary interaction. Throws ProbeAmbiguous when the passes
/// cannot be separated (zero pulse, or overlap at the probe).
ReflectionResult reflection_experiment(const PulseConfig& pulse, BcVariant bc,
                                       const PhysicalParams& params, const StepperConfig& cfg);

/// A manufactured solution: exact fields plus the forcing pair (f, g) that
/// makes it solve the forced problem. Ids: "cos1d", "quad1d", "cos2d".
struct MmsRecipe {
  std::string id;
  double epsilon;
  int dim;
  std::function<Vector(const Grid&, double)> exact_u;
  std::function<Vector(const Grid&, double)> exact_v;
  std::function<Vector(const Grid&, double)> force_interior;
  std::function<Vector(const Grid&, double)> force_boundary;
};

MmsRecipe make_mms_recipe(const std::string& id, double epsilon, const PhysicalParams& params);

struct MmsResult {
  std::vector<double> resolution;  // h values (spatial) or dt values (temporal)
  std::vector<double> error;       // sup-norm error in u at t_end
  std::vector<double> pair_orders;
  double observed_order = 0.0;  // least-squares slope of log error vs log resolution
};

/// Spatial refinement study at dt proportional to h.
MmsResult mms_spatial_study(const MmsRecipe& recipe, const std::vector<int>& n_values,
                            const PhysicalParams& params, const StepperConfig& cfg,
                            double t_end);

/// Temporal refinement study on a spatially exact (quadratic-in-x) recipe.
MmsResult mms_temporal_study(const MmsRecipe& recipe, const std::vector<double>& dt_values,
                             int n, const PhysicalParams& params, const StepperConfig& cfg,
                             double t_end);

/// Sup-norm error of one forced run against the recipe's exact solution.
double mms_run_error(const MmsRecipe& recipe, const Grid& grid, const PhysicalParams& params,
                     const StepperConfig& cfg, double t_end);

}  // namespace westervelt
