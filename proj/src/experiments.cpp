#include "westervelt/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "westervelt/errors.hpp"
#include "westervelt/operators.hpp"

namespace westervelt {

InitialData::InitialData(Vector u0_, Vector u1_, const Grid& grid, const PhysicalParams& params,
                         std::string recipe_, std::map<std::string, double> prm)
    : u0(std::move(u0_)), u1(std::move(u1_)), recipe(std::move(recipe_)),
      recipe_params(std::move(prm)) {
  if (u0.size() != grid.num_nodes() || u1.size() != grid.num_nodes())
    throw ConfigError("initial data fields must match the grid node count");
  const double sup = u0.cwiseAbs().maxCoeff();
  if (!(sup < params.threshold()))
    throw DegeneracyError("max|u0| = " + std::to_string(sup) +
                          " is not below the degeneracy threshold " +
                          std::to_string(params.threshold()));
}

namespace {

double get_or(const std::map<std::string, double>& prm, const std::string& key, double dflt) {
  auto it = prm.find(key);
  return it == prm.end() ? dflt : it->second;
}

Vector gaussian_field(const Grid& grid, double amp, double cx, double wx, double cy, double wy) {
  const int N = grid.num_nodes();
  Vector u(N);
  for (int i = 0; i < N; ++i) {
    double b = (grid.x(i) - cx) / wx;
    double val = amp * std::exp(-b * b);
    if (grid.dim == 2) {
      double by = (grid.y(i) - cy) / wy;
      val *= std::exp(-by * by);
    }
    u[i] = val;
  }
  return u;
}

// Central first derivative along x, second-order one-sided at the ends.
Vector derivative_x(const Grid& grid, const Vector& u) {
  const int n = grid.n[0];
  const double h = grid.h[0];
  Vector d(grid.num_nodes());
  for (int i = 1; i + 1 < n; ++i) d[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
  d[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
  d[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
  return d;
}

}  // namespace

InitialData make_initial_data(const std::string& recipe,
                              const std::map<std::string, double>& prm, const Grid& grid,
                              const PhysicalParams& params) {
  const int N = grid.num_nodes();
  if (recipe == "equilibrium") {
    const double r = get_or(prm, "r_level", 0.0);
    return InitialData(Vector::Constant(N, r), Vector::Zero(N), grid, params, recipe, prm);
  }
  if (recipe == "gaussian" || recipe == "pulse") {
    const double amp = get_or(prm, "amplitude", 0.05);
    const double cx = get_or(prm, "center", 0.5 * (grid.lo[0] + grid.hi[0]));
    const double wx = get_or(prm, "width", 0.1 * (grid.hi[0] - grid.lo[0]));
    const double cy = get_or(prm, "center_y", 0.5 * (grid.lo[1] + grid.hi[1]));
    const double wy = get_or(prm, "width_y", wx);
    if (!(wx > 0.0) || (grid.dim == 2 && !(wy > 0.0)))
      throw ConfigError("recipe '" + recipe + "': width must be positive");
    Vector u0 = gaussian_field(grid, amp, cx, wx, cy, wy);
    Vector u1 = Vector::Zero(N);
    if (recipe == "pulse") {
      if (grid.dim != 1) throw ConfigError("recipe 'pulse' is 1D only");
      u1 = -params.c * derivative_x(grid, u0);
    }
    return InitialData(std::move(u0), std::move(u1), grid, params, recipe, prm);
  }
  throw ConfigError("unknown initial-data recipe '" + recipe +
                    "' (known: equilibrium, gaussian, pulse)");
}

Vector compatibility_residual(const InitialData& data, const PhysicalParams& params,
                              const Grid& grid) {
  const SparseMatrix D = normal_derivative(grid);
  const Vector dn = D * (data.u0 + params.beta * data.u1);
  Vector res(grid.boundary.size());
  for (size_t k = 0; k < grid.boundary.size(); ++k) {
    const int b = grid.boundary[k];
    res[k] = dn[b] + data.u1[b] * std::sqrt(coefficient(data.u0[b], params));
  }
  return res;
}

EnforcementResult enforce_compatibility(const InitialData& data, const PhysicalParams& params,
                                        const Grid& grid, double comp_tol) {
  const Vector res = compatibility_residual(data, params, grid);
  const int nb = static_cast<int>(grid.boundary.size());

  // Collar: the boundary layer and the first inward layer.
  std::vector<int> collar;
  const int nx = grid.n[0], ny = grid.n[1];
  for (int id = 0; id < grid.num_nodes(); ++id) {
    const int ix = id % nx;
    const int iy = grid.dim == 2 ? id / nx : 0;
    bool in = ix <= 1 || ix >= nx - 2;
    if (grid.dim == 2) in = in || iy <= 1 || iy >= ny - 2;
    if (in) collar.push_back(id);
  }
  const int nc = static_cast<int>(collar.size());

  // Residual is linear in u1: rows = beta * D_nu restricted to collar columns
  // plus the impedance diagonal on boundary nodes.
  const SparseMatrix D = normal_derivative(grid);
  const Matrix Dd = Matrix(D);
  Matrix A = Matrix::Zero(nb, nc);
  for (int kb = 0; kb < nb; ++kb) {
    const int b = grid.boundary[kb];
    for (int kc = 0; kc < nc; ++kc) A(kb, kc) = params.beta * Dd(b, collar[kc]);
  }
  for (int kb = 0; kb < nb; ++kb) {
    const int b = grid.boundary[kb];
    const auto it = std::find(collar.begin(), collar.end(), b);
    const int kc = static_cast<int>(it - collar.begin());
    A(kb, kc) += std::sqrt(coefficient(data.u0[b], params));
  }

  // Smallest l2 correction: delta = A^T (A A^T)^{-1} (-res).
  const Matrix gram = A * A.transpose();
  Eigen::JacobiSVD<Matrix> svd(gram, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector sv = svd.singularValues();
  const double cond = sv[0] / sv[sv.size() - 1];
  if (!(sv[sv.size() - 1] > 1e-14 * sv[0]))
    throw EnforcementFailure("collar correction system is numerically singular (cond ~ " +
                             std::to_string(cond) + ")");
  const Vector y = svd.solve(-res);
  const Vector delta = A.transpose() * y;

  Vector u1 = data.u1;
  for (int kc = 0; kc < nc; ++kc) u1[collar[kc]] += delta[kc];
  InitialData fixed(data.u0, std::move(u1), grid, params, data.recipe, data.recipe_params);
  const Vector res_after = compatibility_residual(fixed, params, grid);
  if (res_after.cwiseAbs().maxCoeff() > comp_tol)
    throw EnforcementFailure("correction left a compatibility residual of " +
                             std::to_string(res_after.cwiseAbs().maxCoeff()));
  EnforcementResult out{std::move(fixed), delta.norm(), cond};
  return out;
}

FitResult fit_equilibrium_convergence(const RunResult& run, const Grid& grid,
                                      const PhysicalParams& params, double fit_tol) {
  FitResult fit;
  fit.r_inf = interior_integral(grid, run.final_state.u) / grid.domain_measure();
  if (!(std::abs(fit.r_inf) < params.threshold()))
    throw SolverError("fitted equilibrium level escaped the admissible band");

  const auto& s = run.series;
  if (s.size() < 8) {
    fit.reason = "series too short";
    return fit;
  }
  double v_peak = 0.0;
  size_t peak_at = 0;
  for (size_t i = 1; i < s.size(); ++i) {
    if (s[i].sup_v > v_peak) {
      v_peak = s[i].sup_v;
      peak_at = i;
    }
  }
  if (!(v_peak > 0.0) || !(s.back().sup_v <= 1e-3 * v_peak)) {
    fit.reason = "sup|v| did not decay by 1e3 from its peak";
    return fit;
  }

  std::vector<double> d(s.size());
  for (size_t i = 0; i < s.size(); ++i)
    d[i] = std::max(s[i].u_max - fit.r_inf, fit.r_inf - s[i].u_min) + s[i].sup_v;
  const double d_end = d.back();
  if (!(d_end > 0.0)) {
    fit.reason = "deviation already at zero";
    return fit;
  }

  // Final decade of decay; samples within 3x of the terminal value are floor
  // noise (the r_inf estimate itself carries that scale) and are excluded.
  std::vector<double> ts, ys;
  for (size_t i = peak_at; i < s.size(); ++i) {
    if (d[i] >= 3.0 * d_end && d[i] <= 30.0 * d_end) {
      ts.push_back(s[i].t);
      ys.push_back(std::log(d[i]));
    }
  }
  if (ts.size() < 5 || ts.back() - ts.front() <= 0.0) {
    fit.reason = "decay window too short";
    return fit;
  }
  const double n = static_cast<double>(ts.size());
  const double tm = std::accumulate(ts.begin(), ts.end(), 0.0) / n;
  const double ym = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < ts.size(); ++i) {
    sxx += (ts[i] - tm) * (ts[i] - tm);
    sxy += (ts[i] - tm) * (ys[i] - ym);
  }
  const double slope = sxy / sxx;
  double rms = 0.0;
  for (size_t i = 0; i < ts.size(); ++i) {
    const double pred = ym + slope * (ts[i] - tm);
    rms += (ys[i] - pred) * (ys[i] - pred);
  }
  rms = std::sqrt(rms / n);
  fit.fit_residual = rms;
  if (rms >= fit_tol) {
    fit.reason = "decay is not exponential within fit_tol";
    return fit;
  }
  fit.omega = -slope;
  fit.status = FitStatus::ok;
  return fit;
}

ReflectionResult reflection_experiment(const PulseConfig& pulse, BcVariant bc,
                                       const PhysicalParams& params, const StepperConfig& cfg) {
  const Grid grid = build_grid(1, {0.0, 0.0}, {pulse.domain_length, 0.0}, {pulse.n, 1});
  Problem prob(params, grid);
  prob.bc = bc;

  std::map<std::string, double> prm{{"amplitude", pulse.amplitude},
                                    {"center", pulse.center},
                                    {"width", pulse.width}};
  const InitialData data = make_initial_data("pulse", prm, grid, params);
  const State initial(data.u0, data.u1, 0.0, params);

  const double L = pulse.domain_length;
  const double c = params.c;
  const double t_hit = (L - pulse.center) / c;            // pulse center reaches the wall
  const double t_back = t_hit + (L - pulse.probe_x) / c;  // reflection back at the probe
  const double t_end = t_back + 10.0 * pulse.width / c;
  const int ip = static_cast<int>(std::lround((pulse.probe_x - grid.lo[0]) / grid.h[0]));

  std::vector<std::pair<double, double>> probe;  // (t, |u|)
  const RunResult run = simulate(prob, cfg, initial, t_end,
                                 [&](const State& w, const SeriesSample&) {
                                   probe.emplace_back(w.t, std::abs(w.u[ip]));
                                 });
  if (run.status == RunStatus::degeneracy) throw DegeneracyError(run.error_message, run.fail_time);
  if (run.status == RunStatus::newton_divergence)
    throw NewtonDivergence(run.error_message, run.fail_time);

  ReflectionResult out;
  const double t_gap_lo = (pulse.probe_x - pulse.center) / c + 4.0 * pulse.width / c;
  const double t_gap_hi = t_hit + 0.3 * (L - pulse.probe_x) / c;
  const double t_refl = t_hit + 0.5 * (L - pulse.probe_x) / c;
  double gap_max = 0.0;
  for (const auto& [t, a] : probe) {
    if (t <= t_hit) out.incident_amp = std::max(out.incident_amp, a);
    if (t > t_gap_lo && t < t_gap_hi) gap_max = std::max(gap_max, a);
    if (t >= t_refl) out.reflected_amp = std::max(out.reflected_amp, a);
  }
  if (!(out.incident_amp > 0.0))
    throw ProbeAmbiguous("no incident pulse observed at the probe (zero amplitude?)");
  if (gap_max > 0.5 * out.incident_amp)
    throw ProbeAmbiguous("incident and reflected passes overlap at the probe");
  out.ratio = out.reflected_amp / out.incident_amp;
  return out;
}

MmsRecipe make_mms_recipe(const std::string& id, double eps, const PhysicalParams& params) {
  MmsRecipe r;
  r.id = id;
  r.epsilon = eps;
  const double beta = params.beta, gamma = params.gamma;
  const double ic2 = params.inv_c2();
  const double pi = std::acos(-1.0);

  if (id == "cos1d") {
    r.dim = 1;
    r.exact_u = [eps, pi](const Grid& g, double t) {
      Vector u(g.num_nodes());
      for (int i = 0; i < g.num_nodes(); ++i) u[i] = eps * std::cos(pi * g.x(i)) * std::exp(-t);
      return u;
    };
    r.exact_v = [r](const Grid& g, double t) { return Vector(-r.exact_u(g, t)); };
    r.force_interior = [eps, pi, ic2, beta, gamma, ru = r.exact_u](const Grid& g, double t) {
      Vector us = ru(g, t);
      return Vector(us.array() * (ic2 + pi * pi * (1.0 - beta) - 4.0 * gamma * us.array()));
    };
    r.force_boundary = [eps, ic2, gamma](const Grid& g, double t) {
      // d/dx u* vanishes at both ends; only the impedance term remains.
      Vector out = Vector::Zero(g.num_nodes());
      const double a = eps * std::exp(-t);
      out[0] = -a * std::sqrt(ic2 - 2.0 * gamma * a);
      out[g.num_nodes() - 1] = a * std::sqrt(ic2 + 2.0 * gamma * a);
      return out;
    };
    return r;
  }
  if (id == "quad1d") {
    // Quadratic in x: every spatial stencil is exact, isolating time error.
    r.dim = 1;
    r.exact_u = [eps](const Grid& g, double t) {
      Vector u(g.num_nodes());
      for (int i = 0; i < g.num_nodes(); ++i) {
        const double x = g.x(i);
        u[i] = eps * (1.0 + x * x) * std::exp(-t);
      }
      return u;
    };
    r.exact_v = [r](const Grid& g, double t) { return Vector(-r.exact_u(g, t)); };
    r.force_interior = [eps, ic2, beta, gamma, ru = r.exact_u](const Grid& g, double t) {
      Vector us = ru(g, t);
      const double lap = 2.0 * eps * std::exp(-t);  // lap u* ; lap v* = -lap
      return Vector((ic2 - 2.0 * gamma * us.array()) * us.array() - lap + beta * lap -
                    2.0 * gamma * us.array() * us.array());
    };
    r.force_boundary = [eps, ic2, beta, gamma](const Grid& g, double t) {
      Vector out = Vector::Zero(g.num_nodes());
      const double a = eps * std::exp(-t);
      out[0] = -a * std::sqrt(ic2 - 2.0 * gamma * a);  // u*(0)=a, dx u*(0)=0, v*(0)=-a
      const double u1 = 2.0 * a;                       // u*(1) = 2a, dx u*(1) = 2a
      out[g.num_nodes() - 1] = 2.0 * a * (1.0 - beta) - u1 * std::sqrt(ic2 - 2.0 * gamma * u1);
      return out;
    };
    return r;
  }
  if (id == "cos2d") {
    r.dim = 2;
    r.exact_u = [eps, pi](const Grid& g, double t) {
      Vector u(g.num_nodes());
      for (int i = 0; i < g.num_nodes(); ++i)
        u[i] = eps * std::cos(pi * g.x(i)) * std::cos(pi * g.y(i)) * std::exp(-t);
      return u;
    };
    r.exact_v = [r](const Grid& g, double t) { return Vector(-r.exact_u(g, t)); };
    r.force_interior = [pi, ic2, beta, gamma, ru = r.exact_u](const Grid& g, double t) {
      Vector us = ru(g, t);
      return Vector(us.array() * (ic2 + 2.0 * pi * pi * (1.0 - beta) - 4.0 * gamma * us.array()));
    };
    r.force_boundary = [ic2, gamma, ru = r.exact_u](const Grid& g, double t) {
      // All normal derivatives of u* and v* vanish on the boundary.
      Vector us = ru(g, t);
      Vector out = Vector::Zero(g.num_nodes());
      for (int b : g.boundary)
        out[b] = -us[b] * std::sqrt(ic2 - 2.0 * gamma * us[b]);
      return out;
    };
    return r;
  }
  throw ConfigError("unknown mms recipe '" + id + "' (known: cos1d, quad1d, cos2d)");
}

double mms_run_error(const MmsRecipe& recipe, const Grid& grid, const PhysicalParams& params,
                     const StepperConfig& cfg, double t_end) {
  Problem prob(params, grid);
  prob.source.interior = [&recipe, &grid](double t) { return recipe.force_interior(grid, t); };
  prob.source.boundary = [&recipe, &grid](double t) { return recipe.force_boundary(grid, t); };
  const State initial(recipe.exact_u(grid, 0.0), recipe.exact_v(grid, 0.0), 0.0, params);
  const RunResult run = simulate(prob, cfg, initial, t_end);
  if (run.status != RunStatus::completed)
    throw SolverError("mms run failed: " + run.error_message);
  const Vector exact = recipe.exact_u(grid, t_end);
  return (run.final_state.u - exact).cwiseAbs().maxCoeff();
}

namespace {

MmsResult finish_study(std::vector<double> res, std::vector<double> err) {
  MmsResult out;
  out.resolution = std::move(res);
  out.error = std::move(err);
  for (size_t i = 0; i + 1 < out.error.size(); ++i) {
    out.pair_orders.push_back(std::log(out.error[i] / out.error[i + 1]) /
                              std::log(out.resolution[i] / out.resolution[i + 1]));
  }
  // least-squares slope of log(err) against log(resolution)
  const size_t m = out.error.size();
  double xm = 0.0, ym = 0.0;
  for (size_t i = 0; i < m; ++i) {
    xm += std::log(out.resolution[i]);
    ym += std::log(out.error[i]);
  }
  xm /= m;
  ym /= m;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < m; ++i) {
    sxx += (std::log(out.resolution[i]) - xm) * (std::log(out.resolution[i]) - xm);
    sxy += (std::log(out.resolution[i]) - xm) * (std::log(out.error[i]) - ym);
  }
  out.observed_order = sxy / sxx;
  return out;
}

}  // namespace

MmsResult mms_spatial_study(const MmsRecipe& recipe, const std::vector<int>& n_values,
                            const PhysicalParams& params, const StepperConfig& cfg,
                            double t_end) {
  std::vector<double> hs, errs;
  for (int n : n_values) {
    Grid grid = recipe.dim == 1 ? build_grid(1, {0.0, 0.0}, {1.0, 0.0}, {n, 1})
                                : build_grid(2, {0.0, 0.0}, {1.0, 1.0}, {n, n});
    StepperConfig c = cfg;
    c.dt = grid.h[0];  // couple dt to h; the scheme's O(dt^2) then tracks O(h^2)
    hs.push_back(grid.h[0]);
    errs.push_back(mms_run_error(recipe, grid, params, c, t_end));
  }
  return finish_study(std::move(hs), std::move(errs));
}

MmsResult mms_temporal_study(const MmsRecipe& recipe, const std::vector<double>& dt_values,
                             int n, const PhysicalParams& params, const StepperConfig& cfg,
                             double t_end) {
  Grid grid = recipe.dim == 1 ? build_grid(1, {0.0, 0.0}, {1.0, 0.0}, {n, 1})
                              : build_grid(2, {0.0, 0.0}, {1.0, 1.0}, {n, n});
  std::vector<double> dts, errs;
  for (double dt : dt_values) {
    StepperConfig c = cfg;
    c.dt = dt;
    dts.push_back(dt);
    errs.push_back(mms_run_error(recipe, grid, params, c, t_end));
  }
  return finish_study(std::move(dts), std::move(errs));
}

}  // namespace westervelt
