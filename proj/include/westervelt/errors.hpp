#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace westervelt {

/// Base class for all solver-side failures (exit code 2 at the CLI).
class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The effective coefficient c^-2 - 2*gamma*u dropped to (or below) the
/// configured floor somewhere; the quasilinear problem lost parabolicity.
class DegeneracyError : public SolverError {
public:
  explicit DegeneracyError(const std::string& what, double t = -1.0)
      : SolverError(what), time(t) {}
  double time;  // simulation time of the failure, -1 if not in a run
};

/// Newton iteration hit its cap or the residual increased twice in a row.
class NewtonDivergence : public SolverError {
public:
  explicit NewtonDivergence(const std::string& what, double t = -1.0)
      : SolverError(what), time(t) {}
  double time;
};

/// Invalid run configuration. Carries every issue found, not just the first.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(std::vector<std::string> problems)
      : std::runtime_error(join(problems)), issues(std::move(problems)) {}
  explicit ConfigError(const std::string& problem)
      : ConfigError(std::vector<std::string>{problem}) {}
  std::vector<std::string> issues;

private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& e : v) {
      if (!s.empty()) s += "; ";
      s += e;
    }
    return s;
  }
};

class EigensolverFailure : public SolverError {
public:
  using SolverError::SolverError;
};

/// A singular value fell inside the ambiguity band around the rank
/// tolerance; refusing to call the kernel dimension either way.
class RankToleranceAmbiguous : public SolverError {
public:
  using SolverError::SolverError;
};

/// The local compatibility-correction system could not be solved.
class EnforcementFailure : public SolverError {
public:
  using SolverError::SolverError;
};

/// Incident and reflected pulses could not be separated at the probe.
class ProbeAmbiguous : public SolverError {
public:
  using SolverError::SolverError;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace westervelt
