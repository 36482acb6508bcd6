#include "westervelt/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "westervelt/errors.hpp"
#include "westervelt/report_io.hpp"

namespace westervelt {

namespace {

enum class Kind { text, real, integer, boolean, ulong };

struct Field {
  const char* name;
  Kind kind;
  std::function<std::string(const RunConfig&)> get;
  std::function<bool(RunConfig&, const std::string&)> set;
};

bool to_double(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && p == e;
}

bool to_int(const std::string& s, int& out) {
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && p == e;
}

bool to_ulong(const std::string& s, unsigned long& out) {
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && p == e;
}

bool to_bool(const std::string& s, bool& out) {
  if (s == "true" || s == "1") { out = true; return true; }
  if (s == "false" || s == "0") { out = false; return true; }
  return false;
}

#define TEXT_FIELD(member) \
  Field{#member, Kind::text, [](const RunConfig& c) { return c.member; }, \
        [](RunConfig& c, const std::string& v) { c.member = v; return true; }}
#define REAL_FIELD(member) \
  Field{#member, Kind::real, [](const RunConfig& c) { return format_double(c.member); }, \
        [](RunConfig& c, const std::string& v) { return to_double(v, c.member); }}
#define INT_FIELD(member) \
  Field{#member, Kind::integer, [](const RunConfig& c) { return std::to_string(c.member); }, \
        [](RunConfig& c, const std::string& v) { return to_int(v, c.member); }}
#define BOOL_FIELD(member) \
  Field{#member, Kind::boolean, \
        [](const RunConfig& c) { return c.member ? std::string("true") : std::string("false"); }, \
        [](RunConfig& c, const std::string& v) { return to_bool(v, c.member); }}
#define ULONG_FIELD(member) \
  Field{#member, Kind::ulong, [](const RunConfig& c) { return std::to_string(c.member); }, \
        [](RunConfig& c, const std::string& v) { return to_ulong(v, c.member); }}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      TEXT_FIELD(experiment),
      REAL_FIELD(c),
      REAL_FIELD(beta),
      REAL_FIELD(gamma),
      INT_FIELD(dim),
      REAL_FIELD(x_min),
      REAL_FIELD(x_max),
      INT_FIELD(nx),
      REAL_FIELD(y_min),
      REAL_FIELD(y_max),
      INT_FIELD(ny),
      TEXT_FIELD(scheme),
      REAL_FIELD(dt),
      REAL_FIELD(t_end),
      REAL_FIELD(newton_tol),
      INT_FIELD(newton_max_iter),
      REAL_FIELD(eps_deg),
      TEXT_FIELD(bc),
      TEXT_FIELD(recipe),
      REAL_FIELD(amplitude),
      REAL_FIELD(center),
      REAL_FIELD(width),
      REAL_FIELD(center_y),
      REAL_FIELD(width_y),
      REAL_FIELD(r_level),
      BOOL_FIELD(enforce_compat),
      REAL_FIELD(r),
      REAL_FIELD(probe_x),
      TEXT_FIELD(mms_recipe),
      REAL_FIELD(epsilon),
      TEXT_FIELD(resolutions),
      TEXT_FIELD(dt_list),
      TEXT_FIELD(output),
      ULONG_FIELD(seed),
  };
  return f;
}

#undef TEXT_FIELD
#undef REAL_FIELD
#undef INT_FIELD
#undef BOOL_FIELD
#undef ULONG_FIELD

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      const size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string nearest_key(const std::string& key) {
  std::string best;
  size_t best_d = static_cast<size_t>(-1);
  for (const Field& f : fields()) {
    const size_t d = edit_distance(key, f.name);
    if (d < best_d) {
      best_d = d;
      best = f.name;
    }
  }
  return best;
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::text: return "string";
    case Kind::real: return "real";
    case Kind::integer: return "integer";
    case Kind::boolean: return "boolean";
    case Kind::ulong: return "unsigned integer";
  }
  return "?";
}

void validate(const RunConfig& c, std::vector<std::string>& problems) {
  auto check = [&](bool ok, const std::string& msg) {
    if (!ok) problems.push_back(msg);
  };
  const std::vector<std::string> experiments = {"simulate", "spectrum", "reflection",
                                                "compat-check", "mms"};
  check(std::find(experiments.begin(), experiments.end(), c.experiment) != experiments.end(),
        "experiment: unknown value '" + c.experiment +
            "' (expected simulate|spectrum|reflection|compat-check|mms)");
  check(c.c > 0.0, "c: must be > 0");
  check(c.beta > 0.0, "beta: must be > 0");
  check(c.gamma > 0.0, "gamma: must be > 0");
  check(c.dim == 1 || c.dim == 2, "dim: must be 1 or 2");
  check(c.nx >= 3, "nx: need at least 3 nodes");
  check(c.dim == 1 || c.ny >= 3, "ny: need at least 3 nodes");
  check(c.x_max > c.x_min, "x_max: extent is degenerate");
  check(c.dim == 1 || c.y_max > c.y_min, "y_max: extent is degenerate");
  check(c.scheme == "tr-bdf2" || c.scheme == "backward-euler",
        "scheme: expected tr-bdf2|backward-euler");
  check(c.dt > 0.0, "dt: must be > 0");
  check(c.t_end >= 0.0, "t_end: must be >= 0");
  check(c.newton_tol > 0.0, "newton_tol: must be > 0");
  check(c.newton_max_iter >= 1, "newton_max_iter: must be >= 1");
  check(c.bc == "abc" || c.bc == "neumann" || c.bc == "dirichlet-v",
        "bc: expected abc|neumann|dirichlet-v");
  check(c.recipe == "equilibrium" || c.recipe == "gaussian" || c.recipe == "pulse",
        "recipe: expected equilibrium|gaussian|pulse");
  check(c.width > 0.0, "width: must be > 0");
  check(c.mms_recipe == "cos1d" || c.mms_recipe == "quad1d" || c.mms_recipe == "cos2d",
        "mms_recipe: expected cos1d|quad1d|cos2d");
  check(c.epsilon >= 0.0, "epsilon: must be >= 0");
  check(!c.output.empty(), "output: must not be empty");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::vector<std::string> problems;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      problems.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const Field* field = nullptr;
    for (const Field& f : fields()) {
      if (key == f.name) {
        field = &f;
        break;
      }
    }
    if (!field) {
      problems.push_back("line " + std::to_string(lineno) + ": unknown key '" + key +
                         "' (nearest valid key: '" + nearest_key(key) + "')");
      continue;
    }
    if (!field->set(cfg, value)) {
      problems.push_back("line " + std::to_string(lineno) + ": " + key + ": cannot parse '" +
                         value + "' as " + kind_name(field->kind));
    }
  }
  validate(cfg, problems);
  if (!problems.empty()) throw ConfigError(problems);
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  for (const Field& f : fields()) {
    out += f.name;
    out += " = ";
    out += f.get(cfg);
    out += "\n";
  }
  return out;
}

PhysicalParams make_params(const RunConfig& cfg) {
  return PhysicalParams(cfg.c, cfg.beta, cfg.gamma);
}

Grid make_grid(const RunConfig& cfg) {
  if (cfg.dim == 1) return build_grid(1, {cfg.x_min, 0.0}, {cfg.x_max, 0.0}, {cfg.nx, 1});
  return build_grid(2, {cfg.x_min, cfg.y_min}, {cfg.x_max, cfg.y_max}, {cfg.nx, cfg.ny});
}

Scheme parse_scheme(const std::string& name) {
  if (name == "tr-bdf2") return Scheme::tr_bdf2;
  if (name == "backward-euler") return Scheme::backward_euler;
  throw ConfigError("scheme: unknown value '" + name + "'");
}

BcVariant parse_bc(const std::string& name) {
  if (name == "abc") return BcVariant::abc;
  if (name == "neumann") return BcVariant::neumann;
  if (name == "dirichlet-v") return BcVariant::dirichlet_v;
  throw ConfigError("bc: unknown value '" + name + "'");
}

StepperConfig make_stepper_config(const RunConfig& cfg) {
  StepperConfig s;
  s.dt = cfg.dt;
  s.scheme = parse_scheme(cfg.scheme);
  s.newton_tol = cfg.newton_tol;
  s.newton_max_iter = cfg.newton_max_iter;
  s.eps_deg = cfg.eps_deg;
  return s;
}

std::map<std::string, double> recipe_params(const RunConfig& cfg) {
  return {{"amplitude", cfg.amplitude}, {"center", cfg.center},     {"width", cfg.width},
          {"center_y", cfg.center_y},   {"width_y", cfg.width_y},   {"r_level", cfg.r_level}};
}

std::vector<int> parse_int_list(const std::string& csv, const std::string& field) {
  std::vector<int> out;
  std::istringstream in(csv);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    tok = trim(tok);
    int v;
    if (!to_int(tok, v)) throw ConfigError(field + ": cannot parse '" + tok + "' as integer");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError(field + ": empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& csv, const std::string& field) {
  std::vector<double> out;
  std::istringstream in(csv);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    tok = trim(tok);
    double v;
    if (!to_double(tok, v)) throw ConfigError(field + ": cannot parse '" + tok + "' as real");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError(field + ": empty list");
  return out;
}

}  // namespace westervelt
