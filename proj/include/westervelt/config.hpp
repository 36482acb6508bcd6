#pragma once

#include <map>
#include <string>
#include <vector>

#include "westervelt/grid.hpp"
#include "westervelt/physics.hpp"
#include "westervelt/stepper.hpp"

namespace westervelt {

/// Flat run configuration; one key per struct field, `key = value` lines
/// with `#` comments in files. Unset keys keep the defaults below, and
/// serialize/parse round-trips losslessly.
struct RunConfig {
  std::string experiment = "simulate";  // simulate|spectrum|reflection|compat-check|mms

  double c = 1.0;
  double beta = 1.0;
  double gamma = 0.5;

  int dim = 1;
  double x_min = 0.0;
  double x_max = 1.0;
  int nx = 65;
  double y_min = 0.0;
  double y_max = 1.0;
  int ny = 17;

  std::string scheme = "tr-bdf2";  // backward-euler|tr-bdf2
  double dt = 0.01;
  double t_end = 1.0;
  double newton_tol = 1e-10;
  int newton_max_iter = 12;
  double eps_deg = -1.0;  // < 0 selects the default floor
  std::string bc = "abc";  // abc|neumann|dirichlet-v

  std::string recipe = "gaussian";  // equilibrium|gaussian|pulse
  double amplitude = 0.05;
  double center = 0.5;
  double width = 0.1;
  double center_y = 0.5;
  double width_y = 0.1;
  double r_level = 0.0;
  bool enforce_compat = false;

  double r = 0.0;        // equilibrium level for `spectrum`
  double probe_x = 2.8;  // probe position for `reflection`

  std::string mms_recipe = "cos1d";  // cos1d|quad1d|cos2d
  double epsilon = 0.01;
  std::string resolutions = "33,65,129";
  std::string dt_list = "0.1,0.05,0.025";

  std::string output = "out";
  unsigned long seed = 0;

  bool operator==(const RunConfig&) const = default;
};

/// Parses the documented key-value format. Collects every validation
/// problem (with line and field attribution) into one ConfigError.
RunConfig parse_config(const std::string& text);

/// Canonical serialization: every key, fixed order, 17-significant-digit
/// numbers. parse_config(serialize_config(cfg)) == cfg.
std::string serialize_config(const RunConfig& cfg);

PhysicalParams make_params(const RunConfig& cfg);
Grid make_grid(const RunConfig& cfg);
StepperConfig make_stepper_config(const RunConfig& cfg);
Scheme parse_scheme(const std::string& name);
BcVariant parse_bc(const std::string& name);
std::map<std::string, double> recipe_params(const RunConfig& cfg);

std::vector<int> parse_int_list(const std::string& csv, const std::string& field);
std::vector<double> parse_double_list(const std::string& csv, const std::string& field);

}  // namespace westervelt
