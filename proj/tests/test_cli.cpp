#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "westervelt/cli.hpp"

using namespace westervelt;
namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
  const auto d = fs::temp_directory_path() / "westervelt_cli_tests";
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_cfg(const std::string& name, const std::string& body) {
  const fs::path p = work_dir() / name;
  std::ofstream out(p, std::ios::binary);
  out << body;
  return p;
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(run_cli({}) == 1);
  CHECK(run_cli({"frobnicate"}) == 1);
  CHECK(run_cli({"simulate"}) == 1);  // --config is required
}

TEST_CASE("version exits 0") { CHECK(run_cli({"version"}) == 0); }

TEST_CASE("simulate: equilibrium run reports zero drift") {
  const auto out = (work_dir() / "eq_run").string();
  const auto cfg = write_cfg("eq.cfg",
                             "experiment = simulate\n"
                             "recipe = equilibrium\n"
                             "r_level = 0.25\n"
                             "nx = 33\n"
                             "dt = 0.01\n"
                             "t_end = 0.1\n"
                             "output = " + out + "\n");
  CHECK(run_cli({"simulate", "--config", cfg.string()}) == 0);
  const std::string csv = slurp(out + ".csv");
  CHECK(csv.rfind("t,sup_u_dev,sup_v,bc_residual,energy\n", 0) == 0);
  // every data row reports exactly zero drift
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    CHECK(line.substr(c1 + 1, c2 - c1 - 1) == "0");
  }
  CHECK(rows == 11);
  const std::string report = slurp(out + ".txt");
  CHECK(report.find("status = completed") != std::string::npos);
  CHECK(report.find("r_inf = 0.25") != std::string::npos);
}

TEST_CASE("simulate: bad config exits 1") {
  const auto cfg = write_cfg("bad.cfg", "gamma = -2\n");
  CHECK(run_cli({"simulate", "--config", cfg.string()}) == 1);
  CHECK(run_cli({"simulate", "--config", (work_dir() / "missing.cfg").string()}) == 1);
}

TEST_CASE("simulate: solver failure exits 2 and still writes the report") {
  const auto out = (work_dir() / "blowup").string();
  const auto cfg = write_cfg("blowup.cfg",
                             "experiment = simulate\n"
                             "recipe = gaussian\n"
                             "amplitude = 0.97\n"
                             "center = 0.5\n"
                             "width = 0.12\n"
                             "nx = 33\n"
                             "dt = 0.4\n"
                             "newton_max_iter = 2\n"
                             "t_end = 4\n"
                             "scheme = backward-euler\n"
                             "output = " + out + "\n");
  const int code = run_cli({"simulate", "--config", cfg.string()});
  CHECK(code == 2);
  const std::string report = slurp(out + ".txt");
  CHECK(report.find("status = ") != std::string::npos);
  CHECK(report.find("error = ") != std::string::npos);
  CHECK(report.find("fail_time = ") != std::string::npos);
}

TEST_CASE("spectrum subcommand flags exactly one zero-cluster row") {
  const auto out = (work_dir() / "spec16").string();
  CHECK(run_cli({"spectrum", "--r", "0", "--n", "16", "--dim", "1", "--output", out}) == 0);
  const std::string csv = slurp(out + ".csv");
  size_t ones = 0, pos = 0;
  while ((pos = csv.find(",1\n", pos)) != std::string::npos) {
    ++ones;
    pos += 3;
  }
  CHECK(ones == 1);
  const std::string report = slurp(out + ".txt");
  CHECK(report.find("zero_cluster_count = 1") != std::string::npos);
  CHECK(report.find("semisimple = true") != std::string::npos);
}

TEST_CASE("compat-check reports incompatibility without failing") {
  const auto out = (work_dir() / "compat").string();
  const auto cfg = write_cfg("compat.cfg",
                             "experiment = compat-check\n"
                             "recipe = pulse\n"
                             "amplitude = 0.1\n"
                             "center = 0.5\n"
                             "width = 0.12\n"
                             "nx = 33\n"
                             "output = " + out + "\n");
  CHECK(run_cli({"compat-check", "--config", cfg.string()}) == 0);
  const std::string report = slurp(out + ".txt");
  CHECK(report.find("compatible = false") != std::string::npos);
  CHECK(report.find("max_residual = ") != std::string::npos);

  const auto cfg2 = write_cfg("compat2.cfg",
                              "experiment = compat-check\n"
                              "recipe = pulse\n"
                              "amplitude = 0.1\n"
                              "center = 0.5\n"
                              "width = 0.12\n"
                              "nx = 33\n"
                              "enforce_compat = true\n"
                              "output = " + out + "2\n");
  CHECK(run_cli({"compat-check", "--config", cfg2.string()}) == 0);
  const std::string report2 = slurp(out + "2.txt");
  CHECK(report2.find("residual_after = ") != std::string::npos);
}

TEST_CASE("mms subcommand reports orders") {
  const auto out = (work_dir() / "mms").string();
  const auto cfg = write_cfg("mms.cfg",
                             "experiment = mms\n"
                             "mms_recipe = cos1d\n"
                             "epsilon = 0.01\n"
                             "resolutions = 9,17\n"
                             "dt_list = 0.1,0.05\n"
                             "nx = 17\n"
                             "t_end = 0.5\n"
                             "output = " + out + "\n");
  CHECK(run_cli({"mms", "--config", cfg.string()}) == 0);
  const std::string report = slurp(out + ".txt");
  CHECK(report.find("spatial_order = ") != std::string::npos);
  CHECK(report.find("temporal_order = ") != std::string::npos);
}

TEST_CASE("reflection subcommand writes the ratio") {
  const auto out = (work_dir() / "refl").string();
  const auto cfg = write_cfg("refl.cfg",
                             "experiment = reflection\n"
                             "beta = 0.003\n"
                             "x_min = 0\n"
                             "x_max = 4\n"
                             "nx = 321\n"
                             "dt = 0.01\n"
                             "amplitude = 0.02\n"
                             "center = 1.0\n"
                             "width = 0.18\n"
                             "probe_x = 2.8\n"
                             "bc = abc\n"
                             "output = " + out + "\n");
  CHECK(run_cli({"reflection", "--config", cfg.string()}) == 0);
  const std::string report = slurp(out + ".txt");
  CHECK(report.find("ratio = ") != std::string::npos);
}

TEST_CASE("repeated runs are byte-identical") {
  const auto out1 = (work_dir() / "det1").string();
  const auto out2 = (work_dir() / "det2").string();
  const std::string body =
      "experiment = simulate\n"
      "recipe = gaussian\n"
      "amplitude = 0.1\n"
      "center = 0.3\n"
      "width = 0.1\n"
      "nx = 33\n"
      "dt = 0.02\n"
      "t_end = 1.0\n"
      "seed = 7\n";
  const auto cfg1 = write_cfg("det1.cfg", body + "output = " + out1 + "\n");
  const auto cfg2 = write_cfg("det2.cfg", body + "output = " + out2 + "\n");
  REQUIRE(run_cli({"simulate", "--config", cfg1.string()}) == 0);
  REQUIRE(run_cli({"simulate", "--config", cfg2.string()}) == 0);
  CHECK(slurp(out1 + ".csv") == slurp(out2 + ".csv"));
  // rerun in place: bytes unchanged
  const std::string before = slurp(out1 + ".csv");
  REQUIRE(run_cli({"simulate", "--config", cfg1.string()}) == 0);
  CHECK(slurp(out1 + ".csv") == before);
}

TEST_CASE("WESTERVELT_OUT overrides the output directory") {
  const fs::path dir = work_dir() / "env_override";
  fs::create_directories(dir);
  const auto cfg = write_cfg("env.cfg",
                             "experiment = simulate\n"
                             "recipe = equilibrium\n"
                             "nx = 17\n"
                             "dt = 0.05\n"
                             "t_end = 0.1\n"
                             "output = somewhere/else/run\n");
  setenv("WESTERVELT_OUT", dir.c_str(), 1);
  const int code = run_cli({"simulate", "--config", cfg.string()});
  unsetenv("WESTERVELT_OUT");
  CHECK(code == 0);
  CHECK(fs::exists(dir / "run.csv"));
  CHECK(!fs::exists("somewhere/else/run.csv"));
}
