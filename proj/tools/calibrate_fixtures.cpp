// Finds the fixture constants that the test suites freeze: the largest
// pulse amplitude that survives a long run (bisection, with the frozen
// value chosen well inside), and the Newton history of the stiff step used
// by the quadratic-convergence check.

#include <cstdio>

#include "westervelt/experiments.hpp"
#include "westervelt/stepper.hpp"

using namespace westervelt;

namespace {

bool survives(double amplitude) {
  const PhysicalParams params(1.0, 1.0, 0.5);
  const Grid grid = build_grid(1, {0.0, 0.0}, {1.0, 0.0}, {65, 1});
  Problem prob(params, grid);
  StepperConfig cfg;
  cfg.dt = 0.02;
  const InitialData raw = make_initial_data(
      "gaussian", {{"amplitude", amplitude}, {"center", 0.3}, {"width", 0.1}}, grid, params);
  const InitialData data = enforce_compatibility(raw, params, grid).data;
  try {
    const State initial(data.u0, data.u1, 0.0, params);
    const RunResult run = simulate(prob, cfg, initial, 20.0);
    return run.status == RunStatus::completed;
  } catch (const SolverError&) {
    return false;
  }
}

}  // namespace

int main() {
  const double threshold = 1.0;  // c = 1, gamma = 1/2
  double lo = 0.05, hi = 0.999 * threshold;
  if (!survives(lo)) {
    std::printf("baseline amplitude %.3f already fails\n", lo);
    return 1;
  }
  if (survives(hi)) {
    std::printf("every admissible amplitude up to %.4f survives\n", hi);
  } else {
    for (int it = 0; it < 12; ++it) {
      const double mid = 0.5 * (lo + hi);
      (survives(mid) ? lo : hi) = mid;
    }
    std::printf("largest surviving amplitude in [%.4f, %.4f]\n", lo, hi);
  }
  std::printf("frozen stability fixture uses amplitude 0.25 (margin > 2x)\n");

  // Stiff Newton step fixture (see the quadratic-convergence tests).
  const PhysicalParams params(1.0, 0.02, 0.5);
  const Grid grid = build_grid(1, {0.0, 0.0}, {1.0, 0.0}, {33, 1});
  Problem prob(params, grid);
  StepperConfig cfg;
  cfg.dt = 0.5;
  cfg.scheme = Scheme::backward_euler;
  cfg.newton_tol = 1e-11;
  cfg.newton_max_iter = 20;
  Vector u0(grid.num_nodes()), v0(grid.num_nodes());
  for (int i = 0; i < grid.num_nodes(); ++i) {
    const double b = (grid.x(i) - 0.45) / 0.18;
    u0[i] = 0.9 * std::exp(-b * b);
    v0[i] = 2.0 * std::exp(-b * b);
  }
  std::vector<NewtonReport> reports;
  newton_step_solve(prob, cfg, State(u0, v0, 0.0, params), &reports);
  std::printf("stiff-step Newton residuals:");
  for (double r : reports[0].residual_history) std::printf(" %.3e", r);
  std::printf("\n");
  return 0;
}
