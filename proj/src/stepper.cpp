#include "westervelt/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <Eigen/SparseLU>

#include "westervelt/errors.hpp"

namespace westervelt {

namespace {

// TR-BDF2 stage parameter 2 - sqrt(2) and derived weights.
const double kTrGamma = 2.0 - std::sqrt(2.0);
const double kTrC1 = 1.0 / (kTrGamma * (2.0 - kTrGamma));
const double kTrC0 = 1.0 - kTrC1;  // equals -(1-g)^2/(g(2-g)); this form keeps c0+c1 = 1 exact
const double kTrK = (1.0 - kTrGamma) / (2.0 - kTrGamma);

Vector coefficient_field(const Vector& u, const PhysicalParams& p, double eps_deg, double t) {
  Vector co = Vector::Constant(u.size(), p.inv_c2()) - 2.0 * p.gamma * u;
  double mn = co.minCoeff();
  if (!(mn > eps_deg)) {
    throw DegeneracyError("coefficient c^-2 - 2*gamma*u reached " + std::to_string(mn) +
                              " (floor " + std::to_string(eps_deg) + ")",
                          t);
  }
  return co;
}

Vector eval_source(const std::function<Vector(double)>& s, double t, int n) {
  if (!s) return Vector::Zero(n);
  Vector out = s(t);
  if (out.size() != n) throw ConfigError("source term returned a field of wrong length");
  return out;
}

// Explicit right-hand side G = (lap u + beta lap v + 2 gamma v^2 + f)/coeff(u),
// used as known data by the trapezoidal stage. Boundary entries are not used.
Vector explicit_rhs(const Problem& prob, const StepperConfig& cfg, const State& w) {
  const Vector co = coefficient_field(w.u, prob.params, cfg.floor(prob.params), w.t);
  const Vector f = eval_source(prob.source.interior, w.t, prob.grid.num_nodes());
  Vector num = prob.lap * w.u + prob.params.beta * (prob.lap * w.v) +
               2.0 * prob.params.gamma * w.v.cwiseProduct(w.v) + f;
  return num.cwiseQuotient(co);
}

}  // namespace

StageSystem backward_euler_stage(const Problem& prob, const StepperConfig& cfg,
                                 const State& w_old) {
  StageSystem st;
  st.inv_tau = 1.0 / cfg.dt;
  st.theta = 1.0;
  st.rhs_u = st.inv_tau * w_old.u;
  st.rhs_v = st.inv_tau * w_old.v;
  st.t_stage = w_old.t + cfg.dt;
  st.f = eval_source(prob.source.interior, st.t_stage, prob.grid.num_nodes());
  st.g = eval_source(prob.source.boundary, st.t_stage, prob.grid.num_nodes());
  return st;
}

StageSystem trbdf2_first_stage(const Problem& prob, const StepperConfig& cfg,
                               const State& w_old) {
  StageSystem st;
  st.inv_tau = 1.0 / (kTrGamma * cfg.dt);
  st.theta = 0.5;
  st.rhs_u = st.inv_tau * w_old.u + 0.5 * w_old.v;
  st.rhs_v = st.inv_tau * w_old.v + 0.5 * explicit_rhs(prob, cfg, w_old);
  st.t_stage = w_old.t + kTrGamma * cfg.dt;
  st.f = eval_source(prob.source.interior, st.t_stage, prob.grid.num_nodes());
  st.g = eval_source(prob.source.boundary, st.t_stage, prob.grid.num_nodes());
  return st;
}

StageSystem trbdf2_second_stage(const Problem& prob, const StepperConfig& cfg,
                                const State& w_old, const Vector& u_mid, const Vector& v_mid) {
  StageSystem st;
  st.inv_tau = 1.0 / (kTrK * cfg.dt);
  st.theta = 1.0;
  st.rhs_u = st.inv_tau * (kTrC1 * u_mid + kTrC0 * w_old.u);
  st.rhs_v = st.inv_tau * (kTrC1 * v_mid + kTrC0 * w_old.v);
  st.t_stage = w_old.t + cfg.dt;
  st.f = eval_source(prob.source.interior, st.t_stage, prob.grid.num_nodes());
  st.g = eval_source(prob.source.boundary, st.t_stage, prob.grid.num_nodes());
  return st;
}

Vector stage_residual(const Problem& prob, const StepperConfig& cfg, const StageSystem& st,
                      const Vector& u, const Vector& v) {
  const int N = prob.grid.num_nodes();
  const Vector co = coefficient_field(u, prob.params, cfg.floor(prob.params), st.t_stage);

  Vector r(2 * N);
  r.head(N) = st.inv_tau * u - st.theta * v - st.rhs_u;
  const Vector lap_u = prob.lap * u;
  const Vector lap_v = prob.lap * v;
  r.tail(N) = co.cwiseProduct(st.inv_tau * v - st.rhs_v) -
              st.theta * (lap_u + prob.params.beta * lap_v +
                          2.0 * prob.params.gamma * v.cwiseProduct(v) + st.f);

  const Vector dnu_u = prob.dnu * u;
  const Vector dnu_v = prob.dnu * v;
  for (int b : prob.grid.boundary) {
    double row;
    switch (prob.bc) {
      case BcVariant::abc:
        row = dnu_u[b] + prob.params.beta * dnu_v[b] + v[b] * std::sqrt(co[b]);
        break;
      case BcVariant::neumann:
        row = dnu_u[b] + prob.params.beta * dnu_v[b];
        break;
      case BcVariant::dirichlet_v:
      default:
        row = v[b];
        break;
    }
    r[N + b] = row - st.g[b];
  }
  return r;
}

SparseMatrix stage_jacobian(const Problem& prob, const StepperConfig& cfg, const StageSystem& st,
                            const Vector& u, const Vector& v) {
  const int N = prob.grid.num_nodes();
  const Vector co = coefficient_field(u, prob.params, cfg.floor(prob.params), st.t_stage);
  const double beta = prob.params.beta;
  const double gamma = prob.params.gamma;

  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(prob.lap.nonZeros()) * 2 + 6 * N);

  for (int i = 0; i < N; ++i) {
    trip.emplace_back(i, i, st.inv_tau);
    trip.emplace_back(i, N + i, -st.theta);
  }

  for (int i : prob.grid.interior) {
    // d/du of coeff(u)*(inv_tau v - rhs_v): coeff' = -2 gamma
    trip.emplace_back(N + i, i, -2.0 * gamma * (st.inv_tau * v[i] - st.rhs_v[i]));
    trip.emplace_back(N + i, N + i, co[i] * st.inv_tau - st.theta * 4.0 * gamma * v[i]);
  }
  // Laplacian contributions -theta*lap on u columns and -theta*beta*lap on v
  // columns of the interior momentum rows.
  for (int col = 0; col < prob.lap.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(prob.lap, col); it; ++it) {
      const int i = static_cast<int>(it.row());
      if (prob.grid.is_boundary(i)) continue;  // boundary rows are constraint rows
      trip.emplace_back(N + i, col, -st.theta * it.value());
      trip.emplace_back(N + i, N + col, -st.theta * beta * it.value());
    }
  }

  for (int b : prob.grid.boundary) {
    switch (prob.bc) {
      case BcVariant::abc: {
        const double root = std::sqrt(co[b]);
        trip.emplace_back(N + b, N + b, root);
        trip.emplace_back(N + b, b, -gamma * v[b] / root);
        break;
      }
      case BcVariant::neumann:
        break;
      case BcVariant::dirichlet_v:
        trip.emplace_back(N + b, N + b, 1.0);
        break;
    }
  }
  if (prob.bc != BcVariant::dirichlet_v) {
    for (int col = 0; col < prob.dnu.outerSize(); ++col) {
      for (SparseMatrix::InnerIterator it(prob.dnu, col); it; ++it) {
        const int b = static_cast<int>(it.row());
        trip.emplace_back(N + b, col, it.value());
        trip.emplace_back(N + b, N + col, beta * it.value());
      }
    }
  }

  SparseMatrix J(2 * N, 2 * N);
  J.setFromTriplets(trip.begin(), trip.end());
  J.makeCompressed();
  return J;
}

Vector residual(const Problem& prob, const StepperConfig& cfg, const State& w_new,
                const State& w_old) {
  return stage_residual(prob, cfg, backward_euler_stage(prob, cfg, w_old), w_new.u, w_new.v);
}

SparseMatrix jacobian(const Problem& prob, const StepperConfig& cfg, const State& w_new,
                      const State& w_old) {
  return stage_jacobian(prob, cfg, backward_euler_stage(prob, cfg, w_old), w_new.u, w_new.v);
}

namespace {

std::string short_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

// Newton iteration on one stage; u, v are updated in place.
NewtonReport solve_stage(const Problem& prob, const StepperConfig& cfg, const StageSystem& st,
                         Vector& u, Vector& v) {
  NewtonReport rep;
  const int N = prob.grid.num_nodes();
  Eigen::SparseLU<SparseMatrix> lu;
  double prev = -1.0;
  int increases = 0;
  for (int it = 0;; ++it) {
    const Vector r = stage_residual(prob, cfg, st, u, v);
    const double rn = r.cwiseAbs().maxCoeff();
    rep.residual_history.push_back(rn);
    if (rn <= cfg.newton_tol) {
      rep.iterations = it;
      return rep;
    }
    if (prev >= 0.0 && rn > prev) {
      if (++increases >= 2)
        throw NewtonDivergence("Newton residual increased twice consecutively (last " +
                                   short_num(rn) + ")",
                               st.t_stage);
    } else {
      increases = 0;
    }
    prev = rn;
    if (it >= cfg.newton_max_iter)
      throw NewtonDivergence("Newton did not reach tol " + short_num(cfg.newton_tol) + " in " +
                                 std::to_string(cfg.newton_max_iter) + " iterations (residual " +
                                 short_num(rn) + ")",
                             st.t_stage);
    lu.compute(stage_jacobian(prob, cfg, st, u, v));
    if (lu.info() != Eigen::Success)
      throw NewtonDivergence("sparse LU factorization failed", st.t_stage);
    const Vector d = lu.solve(-r);
    u += d.head(N);
    v += d.tail(N);
  }
}

}  // namespace

State newton_step_solve(const Problem& prob, const StepperConfig& cfg, const State& w_old,
                        std::vector<NewtonReport>* reports) {
  Vector u = w_old.u;
  Vector v = w_old.v;
  if (cfg.scheme == Scheme::backward_euler) {
    NewtonReport rep = solve_stage(prob, cfg, backward_euler_stage(prob, cfg, w_old), u, v);
    if (reports) reports->push_back(std::move(rep));
  } else {
    NewtonReport rep1 = solve_stage(prob, cfg, trbdf2_first_stage(prob, cfg, w_old), u, v);
    NewtonReport rep2 =
        solve_stage(prob, cfg, trbdf2_second_stage(prob, cfg, w_old, u, v), u, v);
    if (reports) {
      reports->push_back(std::move(rep1));
      reports->push_back(std::move(rep2));
    }
  }
  return State(std::move(u), std::move(v), w_old.t + cfg.dt, prob.params);
}

double energy_surrogate(const Grid& grid, const Vector& u, const Vector& v) {
  double e = 0.0;
  for (int i = 0; i < grid.num_nodes(); ++i) e += grid.node_weight[i] * v[i] * v[i];
  if (grid.dim == 1) {
    const double h = grid.h[0];
    for (int i = 0; i + 1 < grid.n[0]; ++i) {
      const double du = (u[i + 1] - u[i]) / h;
      e += h * du * du;
    }
  } else {
    const int nx = grid.n[0], ny = grid.n[1];
    const double hx = grid.h[0], hy = grid.h[1];
    for (int iy = 0; iy < ny; ++iy) {
      const double wy = (iy == 0 || iy == ny - 1) ? hy / 2 : hy;
      for (int ix = 0; ix + 1 < nx; ++ix) {
        const double du = (u[grid.node_id(ix + 1, iy)] - u[grid.node_id(ix, iy)]) / hx;
        e += wy * hx * du * du;
      }
    }
    for (int ix = 0; ix < nx; ++ix) {
      const double wx = (ix == 0 || ix == nx - 1) ? hx / 2 : hx;
      for (int iy = 0; iy + 1 < ny; ++iy) {
        const double du = (u[grid.node_id(ix, iy + 1)] - u[grid.node_id(ix, iy)]) / hy;
        e += wx * hy * du * du;
      }
    }
  }
  return e;
}

SeriesSample diagnostics(const Problem& prob, const State& w) {
  SeriesSample s;
  s.t = w.t;
  s.u_max = w.u.maxCoeff();
  s.u_min = w.u.minCoeff();
  s.sup_v = w.v.cwiseAbs().maxCoeff();
  const Vector co = coefficient_field(w.u, prob.params, 0.0, w.t);
  const Vector g = eval_source(prob.source.boundary, w.t, prob.grid.num_nodes());
  const Vector dnu_u = prob.dnu * w.u;
  const Vector dnu_v = prob.dnu * w.v;
  double bres = 0.0;
  for (int b : prob.grid.boundary) {
    double row;
    switch (prob.bc) {
      case BcVariant::abc:
        row = dnu_u[b] + prob.params.beta * dnu_v[b] + w.v[b] * std::sqrt(co[b]);
        break;
      case BcVariant::neumann:
        row = dnu_u[b] + prob.params.beta * dnu_v[b];
        break;
      case BcVariant::dirichlet_v:
      default:
        row = w.v[b];
        break;
    }
    bres = std::max(bres, std::abs(row - g[b]));
  }
  s.bc_residual = bres;
  s.energy = energy_surrogate(prob.grid, w.u, w.v);
  return s;
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::degeneracy: return "degeneracy";
    case RunStatus::newton_divergence: return "newton_divergence";
  }
  return "unknown";
}

RunResult simulate(const Problem& prob, const StepperConfig& cfg, const State& initial,
                   double t_end, const Observer& observe) {
  RunResult out;
  out.final_state = initial;
  {
    SeriesSample s0 = diagnostics(prob, initial);
    out.series.push_back(s0);
    if (observe) observe(initial, s0);
  }
  State w = initial;
  const double span = t_end - initial.t;
  if (span <= 0.0) return out;
  const long nsteps = std::max<long>(1, static_cast<long>(std::ceil(span / cfg.dt - 1e-9)));
  try {
    for (long k = 0; k < nsteps; ++k) {
      StepperConfig step_cfg = cfg;
      if (k == nsteps - 1) step_cfg.dt = t_end - w.t;  // land exactly on t_end
      std::vector<NewtonReport> reps;
      w = newton_step_solve(prob, step_cfg, w, &reps);
      for (const auto& r : reps) out.total_newton_iterations += r.iterations;
      SeriesSample s = diagnostics(prob, w);
      out.series.push_back(s);
      out.final_state = w;
      if (observe) observe(w, s);
    }
    out.status = RunStatus::completed;
  } catch (const DegeneracyError& e) {
    out.status = RunStatus::degeneracy;
    out.error_message = e.what();
    out.fail_time = w.t;
  } catch (const NewtonDivergence& e) {
    out.status = RunStatus::newton_divergence;
    out.error_message = e.what();
    out.fail_time = w.t;
  }
  return out;
}

}  // namespace westervelt
