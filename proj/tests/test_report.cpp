#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "coassoc/report.hpp"
#include "coassoc/rng.hpp"

using namespace coassoc;
namespace fs = std::filesystem;

TEST_CASE("17-digit formatting is bit-exact on re-parse") {
  Rng rng(61);
  for (int i = 0; i < 200; ++i) {
    const double v = rng.normal() * std::pow(10.0, rng.uniform(-8, 8));
    CHECK(std::stod(fmt17(v)) == v);
  }
}

TEST_CASE("config parsing and overrides") {
  const fs::path dir = fs::temp_directory_path() / "coassoc_test_cfg";
  fs::create_directories(dir);
  const std::string path = (dir / "cfg.txt").string();
  {
    std::ofstream f(path);
    f << "# comment line\n";
    f << "lambda = 2.5\n";
    f << "seed = 42\n";
    f << "tol.fd_step = 1e-5   # trailing comment\n";
  }
  RunConfig cfg;
  apply_config_file(cfg, path);
  CHECK(cfg.lambda == 2.5);
  CHECK(cfg.seed == 42);
  CHECK(cfg.tol.at("fd_step") == 1e-5);
  CHECK(cfg.tol.at("ode_tol") == 1e-10);  // untouched default

  {
    std::ofstream f(path);
    f << "bogus = 1\n";
  }
  RunConfig cfg2;
  CHECK_THROWS_AS(apply_config_file(cfg2, path), ConfigError);

  {
    std::ofstream f(path);
    f << "tol.residual_tol = -1\n";
  }
  RunConfig cfg3;
  CHECK_THROWS_AS(apply_config_file(cfg3, path), ConfigError);

  // environment hookup
  setenv("COASSOC_CONFIG", path.c_str(), 1);
  CHECK_THROWS_AS(load_config_env(), ConfigError);
  unsetenv("COASSOC_CONFIG");
  CHECK(load_config_env().lambda == 1.0);
}

TEST_CASE("csv write/read round trip is exact") {
  const fs::path dir = fs::temp_directory_path() / "coassoc_test_csv";
  fs::create_directories(dir);
  CurveFile f;
  f.path = (dir / "t.csv").string();
  f.header_meta = "# case=su2 lambda=1 C=0.5 stratum=main";
  f.columns = {"t", "r", "x5"};
  Rng rng(62);
  for (int i = 0; i < 20; ++i)
    f.rows.push_back({rng.normal(), rng.normal() * 1e-7, rng.normal() * 1e5});
  write_csv(f);
  const CurveFile g = read_csv(f.path);
  REQUIRE(g.rows.size() == f.rows.size());
  CHECK(g.columns == f.columns);
  CHECK(g.header_meta == f.header_meta);
  for (size_t i = 0; i < f.rows.size(); ++i)
    for (size_t j = 0; j < 3; ++j) CHECK(g.rows[i][j] == f.rows[i][j]);
}

TEST_CASE("emitted samples re-validate; corrupted samples do not") {
  const double lam = 1.0;
  const auto curves = trace_level(SymCase::SU2, {0.5}, lam, 32);
  REQUIRE(!curves.empty());
  const fs::path dir = fs::temp_directory_path() / "coassoc_test_rt";
  fs::create_directories(dir);
  CurveFile f = curve_to_file(curves[0], lam, (dir / "c.csv").string());
  write_csv(f);
  const CurveFile g = read_csv(f.path);
  CHECK(roundtrip_residual(g) < 1e-9);

  CurveFile bad = g;
  bad.rows[bad.rows.size() / 2][1] += 1e-3;  // corrupt one radius
  CHECK(roundtrip_residual(bad) > 1e-6);
}

TEST_CASE("identical seeds reproduce identical sampling streams") {
  Rng a(987654321), b(987654321);
  for (int i = 0; i < 1000; ++i) CHECK(a.uniform() == b.uniform());
  Rng c(1), d(2);
  bool differ = false;
  for (int i = 0; i < 10; ++i) differ |= c.uniform() != d.uniform();
  CHECK(differ);
}
