#include "westervelt/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "westervelt/config.hpp"
#include "westervelt/errors.hpp"
#include "westervelt/experiments.hpp"
#include "westervelt/linear_analysis.hpp"
#include "westervelt/report_io.hpp"

namespace westervelt {

namespace {

using KV = std::vector<std::pair<std::string, std::string>>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Applies the WESTERVELT_OUT directory override to an output base path.
std::string resolve_output(const std::string& base) {
  const char* env = std::getenv("WESTERVELT_OUT");
  if (!env || !*env) return base;
  const std::filesystem::path p(base);
  return (std::filesystem::path(env) / p.filename()).string();
}

RunConfig load_config(const std::string& path, const std::string& output_override) {
  RunConfig cfg = parse_config(read_file(path));
  if (!output_override.empty()) cfg.output = output_override;
  return cfg;
}

InitialData build_initial_data(const RunConfig& cfg, const Grid& grid,
                               const PhysicalParams& params, KV& summary) {
  InitialData data = make_initial_data(cfg.recipe, recipe_params(cfg), grid, params);
  if (cfg.enforce_compat) {
    EnforcementResult fixed = enforce_compatibility(data, params, grid);
    summary.emplace_back("compat_correction_norm", format_double(fixed.correction_norm));
    return fixed.data;
  }
  return data;
}

int cmd_simulate(const RunConfig& cfg) {
  const PhysicalParams params = make_params(cfg);
  const Grid grid = make_grid(cfg);
  const StepperConfig scfg = make_stepper_config(cfg);
  Problem prob(params, grid);
  prob.bc = parse_bc(cfg.bc);

  KV summary;
  summary.emplace_back("experiment", "simulate");
  const InitialData data = build_initial_data(cfg, grid, params, summary);
  const State initial(data.u0, data.u1, 0.0, params);
  const RunResult run = simulate(prob, scfg, initial, cfg.t_end);
  const FitResult fit = fit_equilibrium_convergence(run, grid, params);

  const std::string base = resolve_output(cfg.output);
  write_series(base + ".csv", run.series, fit.r_inf);

  summary.emplace_back("status", to_string(run.status));
  if (run.status != RunStatus::completed) {
    summary.emplace_back("error", run.error_message);
    summary.emplace_back("fail_time", format_double(run.fail_time));
  }
  summary.emplace_back("t_final", format_double(run.final_state.t));
  summary.emplace_back("steps", std::to_string(run.series.size() - 1));
  summary.emplace_back("newton_iterations", std::to_string(run.total_newton_iterations));
  summary.emplace_back("r_inf", format_double(fit.r_inf));
  summary.emplace_back("fit_status", fit.status == FitStatus::ok ? "ok" : "unreliable");
  if (fit.status == FitStatus::ok) {
    summary.emplace_back("omega", format_double(fit.omega));
    summary.emplace_back("fit_residual", format_double(fit.fit_residual));
  } else {
    summary.emplace_back("fit_reason", fit.reason);
  }
  summary.emplace_back("sup_v_final", format_double(run.series.back().sup_v));
  summary.emplace_back("seed", std::to_string(cfg.seed));
  write_report(base + ".txt", summary);

  if (run.status != RunStatus::completed) {
    std::cerr << "solver error: " << run.error_message << "\n";
    return 2;
  }
  return 0;
}

int cmd_spectrum(double r, int n, int dim, double c, double beta, double gamma,
                 const std::string& output) {
  const PhysicalParams params(c, beta, gamma);
  const Grid grid = dim == 1 ? build_grid(1, {0.0, 0.0}, {1.0, 0.0}, {n, 1})
                             : build_grid(2, {0.0, 0.0}, {1.0, 1.0}, {n, n});
  const LinearizedOperator op = assemble_a0(r, grid, params);
  const ComplexVector ev = spectrum(op);
  const double sigma_max = operator_norm(op);
  const double zero_tol = 1e-10 * sigma_max;

  const std::string base = resolve_output(output);
  write_spectrum_csv(base + ".csv", ev, zero_tol);

  int zero_count = 0;
  double max_re_nonzero = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i]) < zero_tol)
      ++zero_count;
    else
      max_re_nonzero = std::max(max_re_nonzero, ev[i].real());
  }
  const SemisimplicityReport ss = kernel_and_semisimplicity(op);

  KV summary;
  summary.emplace_back("experiment", "spectrum");
  summary.emplace_back("dim", std::to_string(dim));
  summary.emplace_back("n", std::to_string(n));
  summary.emplace_back("r", format_double(r));
  summary.emplace_back("sigma_max", format_double(sigma_max));
  summary.emplace_back("zero_cluster_count", std::to_string(zero_count));
  summary.emplace_back("spectral_gap", format_double(-max_re_nonzero));
  summary.emplace_back("kernel_dim", std::to_string(ss.kernel_dim));
  summary.emplace_back("zero_algebraic_multiplicity",
                       std::to_string(ss.zero_algebraic_multiplicity));
  summary.emplace_back("semisimple", ss.semisimple ? "true" : "false");
  summary.emplace_back("jordan_probe_residual", format_double(ss.jordan_probe_residual));
  write_report(base + ".txt", summary);
  return 0;
}

int cmd_reflection(const RunConfig& cfg) {
  const PhysicalParams params = make_params(cfg);
  PulseConfig pulse;
  pulse.domain_length = cfg.x_max - cfg.x_min;
  pulse.n = cfg.nx;
  pulse.amplitude = cfg.amplitude;
  pulse.center = cfg.center;
  pulse.width = cfg.width;
  pulse.probe_x = cfg.probe_x;
  const ReflectionResult res =
      reflection_experiment(pulse, parse_bc(cfg.bc), params, make_stepper_config(cfg));

  KV summary;
  summary.emplace_back("experiment", "reflection");
  summary.emplace_back("bc", cfg.bc);
  summary.emplace_back("incident_amp", format_double(res.incident_amp));
  summary.emplace_back("reflected_amp", format_double(res.reflected_amp));
  summary.emplace_back("ratio", format_double(res.ratio));
  write_report(resolve_output(cfg.output) + ".txt", summary);
  return 0;
}

int cmd_compat_check(const RunConfig& cfg) {
  const PhysicalParams params = make_params(cfg);
  const Grid grid = make_grid(cfg);
  const InitialData data = make_initial_data(cfg.recipe, recipe_params(cfg), grid, params);
  const Vector res = compatibility_residual(data, params, grid);
  const double max_res = res.cwiseAbs().maxCoeff();
  const double comp_tol = 1e-10;

  KV summary;
  summary.emplace_back("experiment", "compat-check");
  summary.emplace_back("compatible", max_res <= comp_tol ? "true" : "false");
  summary.emplace_back("max_residual", format_double(max_res));
  if (cfg.enforce_compat) {
    const EnforcementResult fixed = enforce_compatibility(data, params, grid, comp_tol);
    const Vector after = compatibility_residual(fixed.data, params, grid);
    summary.emplace_back("correction_norm", format_double(fixed.correction_norm));
    summary.emplace_back("residual_after", format_double(after.cwiseAbs().maxCoeff()));
    summary.emplace_back("conditioning", format_double(fixed.conditioning));
  }
  write_report(resolve_output(cfg.output) + ".txt", summary);
  return 0;
}

int cmd_mms(const RunConfig& cfg) {
  const PhysicalParams params = make_params(cfg);
  const StepperConfig scfg = make_stepper_config(cfg);
  const MmsRecipe spatial_recipe = make_mms_recipe(cfg.mms_recipe, cfg.epsilon, params);
  const MmsRecipe temporal_recipe = make_mms_recipe("quad1d", cfg.epsilon, params);

  const MmsResult spatial = mms_spatial_study(
      spatial_recipe, parse_int_list(cfg.resolutions, "resolutions"), params, scfg, cfg.t_end);
  const MmsResult temporal = mms_temporal_study(
      temporal_recipe, parse_double_list(cfg.dt_list, "dt_list"), cfg.nx, params, scfg,
      cfg.t_end);

  KV summary;
  summary.emplace_back("experiment", "mms");
  summary.emplace_back("recipe", cfg.mms_recipe);
  summary.emplace_back("scheme", cfg.scheme);
  for (size_t i = 0; i < spatial.error.size(); ++i) {
    summary.emplace_back("spatial_h_" + std::to_string(i), format_double(spatial.resolution[i]));
    summary.emplace_back("spatial_err_" + std::to_string(i), format_double(spatial.error[i]));
  }
  summary.emplace_back("spatial_order", format_double(spatial.observed_order));
  for (size_t i = 0; i < temporal.error.size(); ++i) {
    summary.emplace_back("temporal_dt_" + std::to_string(i),
                         format_double(temporal.resolution[i]));
    summary.emplace_back("temporal_err_" + std::to_string(i), format_double(temporal.error[i]));
  }
  summary.emplace_back("temporal_order", format_double(temporal.observed_order));
  write_report(resolve_output(cfg.output) + ".txt", summary);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Finite-difference simulator and spectral analysis for nonlinear acoustics "
               "with absorbing boundary conditions"};
  app.name("westervelt");
  app.require_subcommand(1);

  std::string config_path, output_override;

  auto* sim = app.add_subcommand("simulate", "time-step an initial boundary value problem");
  sim->add_option("--config", config_path, "run configuration file")->required();
  sim->add_option("--output", output_override, "override the output base path");

  double sp_r = 0.0, sp_c = 1.0, sp_beta = 1.0, sp_gamma = 0.5;
  int sp_n = 32, sp_dim = 1;
  std::string sp_out = "spectrum";
  auto* spec = app.add_subcommand("spectrum",
                                  "eigenvalues of the linearization at an equilibrium");
  spec->add_option("--r", sp_r, "equilibrium pressure level");
  spec->add_option("--n", sp_n, "nodes per axis");
  spec->add_option("--dim", sp_dim, "1 or 2");
  spec->add_option("--c", sp_c, "sound speed");
  spec->add_option("--beta", sp_beta, "sound diffusivity");
  spec->add_option("--gamma", sp_gamma, "nonlinearity parameter");
  spec->add_option("--output", sp_out, "output base path");

  auto* refl = app.add_subcommand("reflection", "boundary reflection measurement");
  refl->add_option("--config", config_path, "run configuration file")->required();
  refl->add_option("--output", output_override, "override the output base path");

  auto* compat = app.add_subcommand("compat-check",
                                    "check (and optionally enforce) initial-data compatibility");
  compat->add_option("--config", config_path, "run configuration file")->required();
  compat->add_option("--output", output_override, "override the output base path");

  auto* mms = app.add_subcommand("mms", "manufactured-solution convergence study");
  mms->add_option("--config", config_path, "run configuration file")->required();
  mms->add_option("--output", output_override, "override the output base path");

  auto* ver = app.add_subcommand("version", "print the version and exit");

  std::vector<const char*> argv;
  argv.push_back("westervelt");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*ver) {
      std::cout << "westervelt " << kVersion << "\n";
      return 0;
    }
    if (*spec) return cmd_spectrum(sp_r, sp_n, sp_dim, sp_c, sp_beta, sp_gamma, sp_out);
    const RunConfig cfg = load_config(config_path, output_override);
    if (*sim) return cmd_simulate(cfg);
    if (*refl) return cmd_reflection(cfg);
    if (*compat) return cmd_compat_check(cfg);
    if (*mms) return cmd_mms(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error:\n";
    for (const auto& issue : e.issues) std::cerr << "  " << issue << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace westervelt
