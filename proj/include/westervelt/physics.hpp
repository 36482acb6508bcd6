#pragma once

#include <cmath>
#include <string>

#include "westervelt/errors.hpp"
#include "westervelt/types.hpp"

namespace westervelt {

/// Physical parameters of the quasilinear acoustic model
///   (c^-2 - 2*gamma*u) u_tt - lap(u) - beta*lap(u_t) = 2*gamma*(u_t)^2.
///
/// c is the sound speed, beta the sound diffusivity and gamma the parameter
/// of nonlinearity; all three must be strictly positive.
struct PhysicalParams {
  double c;
  double beta;
  double gamma;

  PhysicalParams(double c_, double beta_, double gamma_)
      : c(c_), beta(beta_), gamma(gamma_) {
    std::vector<std::string> bad;
    if (!(c > 0.0)) bad.push_back("c must be > 0, got " + std::to_string(c));
    if (!(beta > 0.0)) bad.push_back("beta must be > 0, got " + std::to_string(beta));
    if (!(gamma > 0.0)) bad.push_back("gamma must be > 0, got " + std::to_string(gamma));
    if (!bad.empty()) throw ConfigError(bad);
  }

  double inv_c2() const { return 1.0 / (c * c); }

  /// Pressure level 1/(2*gamma*c^2) at which the u_tt coefficient vanishes.
  double threshold() const { return 1.0 / (2.0 * gamma * c * c); }
};

/// Default floor for the u_tt coefficient below which a run is aborted.
inline double default_eps_deg(const PhysicalParams& p) { return 1e-6 * p.inv_c2(); }

/// Effective u_tt coefficient c^-2 - 2*gamma*u at one node.
/// Throws DegeneracyError when the value is at or below eps_deg.
inline double coefficient(double u_point, const PhysicalParams& p, double eps_deg = 0.0) {
  const double value = p.inv_c2() - 2.0 * p.gamma * u_point;
  if (value <= eps_deg) {
    throw DegeneracyError("coefficient c^-2 - 2*gamma*u = " + std::to_string(value) +
                          " at u = " + std::to_string(u_point) +
                          " is at or below the degeneracy floor " + std::to_string(eps_deg));
  }
  return value;
}

/// Boundary impedance factor sqrt(c^-2 - 2*gamma*r) of the constant level r.
/// Defined only on the equilibrium band |r| < threshold.
inline double cr(double r, const PhysicalParams& p) {
  if (!(std::abs(r) < p.threshold())) {
    throw DegeneracyError("level |r| = " + std::to_string(std::abs(r)) +
                          " is outside the admissible band (threshold " +
                          std::to_string(p.threshold()) + ")");
  }
  return std::sqrt(coefficient(r, p));
}

/// Quadratic forcing 2*gamma*v^2 / (c^-2 - 2*gamma*u) of the first-order form.
inline double rhs_nonlinearity(double v_point, double u_point, const PhysicalParams& p,
                               double eps_deg = 0.0) {
  return 2.0 * p.gamma * v_point * v_point / coefficient(u_point, p, eps_deg);
}

/// A constant state (r, 0); admissible only for |r| below the threshold.
struct Equilibrium {
  double r;

  Equilibrium(double r_, const PhysicalParams& p) : r(r_) {
    if (!(std::abs(r) < p.threshold())) {
      throw DegeneracyError("equilibrium level |r| = " + std::to_string(std::abs(r)) +
                            " is not below the threshold " + std::to_string(p.threshold()));
    }
  }
};

/// First-order unknowns w = (u, v) with v = u_t, at time t.
///
/// Construction enforces the strict sup-norm admissibility
/// max|u| < threshold - margin (margin 0 by default, so states arbitrarily
/// close to the critical level can still be built for degeneracy tests).
struct State {
  Vector u;
  Vector v;
  double t = 0.0;

  State() = default;
  State(Vector u_, Vector v_, double t_, const PhysicalParams& p, double margin = 0.0)
      : u(std::move(u_)), v(std::move(v_)), t(t_) {
    if (u.size() != v.size()) {
      throw ConfigError("state fields u and v must have equal length, got " +
                        std::to_string(u.size()) + " and " + std::to_string(v.size()));
    }
    const double sup = u.size() ? u.cwiseAbs().maxCoeff() : 0.0;
    if (!(sup < p.threshold() - margin)) {
      throw DegeneracyError("max|u| = " + std::to_string(sup) +
                            " violates the admissibility bound " +
                            std::to_string(p.threshold() - margin));
    }
  }
};

}  // namespace westervelt
