#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <doctest.h>

#include "westervelt/config.hpp"
#include "westervelt/errors.hpp"
#include "westervelt/report_io.hpp"

using namespace westervelt;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp_dir() {
  const auto d = std::filesystem::temp_directory_path() / "westervelt_io_tests";
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("minimal config fills documented defaults") {
  const RunConfig cfg = parse_config("experiment = simulate\n");
  RunConfig expected;
  expected.experiment = "simulate";
  CHECK(cfg == expected);
  CHECK(cfg.nx == 65);
  CHECK(cfg.scheme == "tr-bdf2");
}

TEST_CASE("comments, blank lines and spacing") {
  const RunConfig cfg = parse_config(
      "# a comment line\n"
      "\n"
      "  gamma   =  0.25   # trailing comment\n"
      "nx=129\n");
  CHECK(cfg.gamma == 0.25);
  CHECK(cfg.nx == 129);
}

TEST_CASE("config round-trips losslessly") {
  RunConfig cfg;
  cfg.experiment = "mms";
  cfg.gamma = 0.1 + 0.2;  // not representable in decimal shorthand
  cfg.dt = 1.0 / 3.0;
  cfg.newton_tol = 3e-322;  // subnormal survives
  cfg.nx = 129;
  cfg.enforce_compat = true;
  cfg.resolutions = "9,17,33";
  cfg.seed = 123456789012345ull;
  cfg.output = "runs/case7";
  const RunConfig back = parse_config(serialize_config(cfg));
  CHECK(back == cfg);
}

TEST_CASE("randomized configs round-trip") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uni(1e-6, 10.0);
  for (int t = 0; t < 25; ++t) {
    RunConfig cfg;
    cfg.c = uni(rng);
    cfg.beta = uni(rng);
    cfg.gamma = uni(rng);
    cfg.dt = uni(rng);
    cfg.t_end = uni(rng);
    cfg.amplitude = uni(rng) * 1e-3;
    cfg.width = uni(rng);
    cfg.x_max = 1.0 + uni(rng);
    cfg.nx = 3 + static_cast<int>(uni(rng) * 10);
    cfg.seed = static_cast<unsigned long>(uni(rng) * 1e12);
    CHECK(parse_config(serialize_config(cfg)) == cfg);
  }
}

TEST_CASE("validation failures carry field names and are all collected") {
  try {
    parse_config("gamma = -1\nnx = 2\nexperiment = fly\n");
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(e.issues.size() == 3);
    bool saw_gamma = false;
    for (const auto& m : e.issues) saw_gamma |= m.find("gamma") != std::string::npos;
    CHECK(saw_gamma);
  }
}

TEST_CASE("unknown keys name the nearest valid key") {
  try {
    parse_config("gama = 0.5\n");
    CHECK(false);
  } catch (const ConfigError& e) {
    REQUIRE(e.issues.size() == 1);
    CHECK(e.issues[0].find("unknown key 'gama'") != std::string::npos);
    CHECK(e.issues[0].find("'gamma'") != std::string::npos);
    CHECK(e.issues[0].find("line 1") != std::string::npos);
  }
}

TEST_CASE("parse errors carry line numbers") {
  try {
    parse_config("c = 1.0\ndt = fast\nnonsense line\n");
    CHECK(false);
  } catch (const ConfigError& e) {
    REQUIRE(e.issues.size() == 2);
    CHECK(e.issues[0].find("line 2") != std::string::npos);
    CHECK(e.issues[1].find("line 3") != std::string::npos);
  }
}

TEST_CASE("list parsing") {
  CHECK(parse_int_list("33, 65,129", "resolutions") == std::vector<int>{33, 65, 129});
  CHECK(parse_double_list("0.1,0.05", "dt_list") == std::vector<double>{0.1, 0.05});
  CHECK_THROWS_AS(parse_int_list("a,b", "resolutions"), ConfigError);
  CHECK_THROWS_AS(parse_double_list("", "dt_list"), ConfigError);
}

TEST_CASE("format_double round-trips bit-exactly") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 123456.789, -2.2250738585072014e-308}) {
    const std::string s = format_double(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
    CHECK(s.find(',') == std::string::npos);  // locale-independent decimal point
  }
}

TEST_CASE("series csv") {
  const auto dir = temp_dir();
  const std::string path = (dir / "series.csv").string();
  SUBCASE("empty series produces a header-only file") {
    write_series(path, {}, 0.0);
    CHECK(slurp(path) == "t,sup_u_dev,sup_v,bc_residual,energy\n");
  }
  SUBCASE("rows carry full precision and unix line endings") {
    std::vector<SeriesSample> s(1);
    s[0] = {0.5, 0.25, -0.25, 0.125, 1e-11, 2.0};
    write_series(path, s, 0.0);
    const std::string text = slurp(path);
    // 17 significant digits: 1e-11 is not a dyadic rational
    CHECK(text ==
          "t,sup_u_dev,sup_v,bc_residual,energy\n0.5,0.25,0.125,9.9999999999999994e-12,2\n");
  }
  SUBCASE("identical inputs give byte-identical files") {
    std::vector<SeriesSample> s(3);
    s[0] = {0.0, 0.1 + 0.2, -0.1, 0.5, 1e-12, 3.25};
    s[1] = {0.1, 0.30000004, -0.2, 0.25, 2e-12, 3.0};
    s[2] = {0.2, 0.2, -0.3, 0.125, 3e-12, 2.75};
    const std::string p2 = (dir / "series2.csv").string();
    write_series(path, s, 0.05);
    write_series(p2, s, 0.05);
    CHECK(slurp(path) == slurp(p2));
  }
}

TEST_CASE("spectrum csv ordering and zero flag") {
  const auto dir = temp_dir();
  const std::string path = (dir / "spec.csv").string();
  ComplexVector ev(4);
  ev[0] = Complex(-1.0, 0.5);
  ev[1] = Complex(1e-14, 0.0);
  ev[2] = Complex(-1.0, -0.5);
  ev[3] = Complex(-0.25, 0.0);
  write_spectrum_csv(path, ev, 1e-10);
  const std::string text = slurp(path);
  CHECK(text ==
        "re,im,is_zero_cluster\n"
        "1e-14,0,1\n"
        "-0.25,0,0\n"
        "-1,-0.5,0\n"
        "-1,0.5,0\n");
}

TEST_CASE("report writer emits flat key-value lines") {
  const auto dir = temp_dir();
  const std::string path = (dir / "report.txt").string();
  write_report(path, {{"status", "completed"}, {"omega", "0.69"}});
  CHECK(slurp(path) == "status = completed\nomega = 0.69\n");
}

TEST_CASE("unwritable path raises IoError") {
  CHECK_THROWS_AS(write_report("/proc/version/not_a_dir/report.txt", {{"a", "b"}}), IoError);
}
