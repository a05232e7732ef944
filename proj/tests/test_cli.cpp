#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "darboux/cli.hpp"

using namespace dbx;
using namespace dbx::cli;
namespace fs = std::filesystem;

namespace {

RunConfig test_config(const std::string& out) {
  RunConfig cfg;
  cfg.nx = 257;
  cfg.states = 3;
  cfg.out = out;
  return cfg;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) : path(fs::temp_directory_path() / ("darboux_test_" + tag)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config round-trips through JSON with stable keys") {
  RunConfig cfg;
  cfg.m = 2;
  cfg.l = 5;
  cfg.states = 4;
  cfg.nx = 513;
  cfg.t_samples = {0.0, 1.0};
  cfg.tol_quadrature = 2e-6;
  cfg.out = "elsewhere";
  const Json j = config_to_json(cfg);
  CHECK(config_from_json(j) == cfg);
  CHECK(j.begin().key() == "m");  // ordered serialization

  // defaults fill missing keys
  const RunConfig partial = config_from_json(Json{{"m", 2}, {"l", 3}});
  CHECK(partial.m == 2);
  CHECK(partial.l == 3);
  CHECK(partial.nx == 1025);
}

TEST_CASE("validation rejects bad parity, range and grids") {
  RunConfig odd = test_config("x");
  odd.m = 1;
  CHECK_THROWS_AS(validate(odd), std::invalid_argument);
  RunConfig parity = test_config("x");
  parity.l = 2;
  CHECK_THROWS_AS(validate(parity), std::invalid_argument);
  RunConfig states = test_config("x");
  states.states = 2;
  CHECK_THROWS_AS(validate(states), std::invalid_argument);
  RunConfig grid = test_config("x");
  grid.nx = 100;
  CHECK_THROWS_AS(validate(grid), std::invalid_argument);
  CHECK_NOTHROW(validate(test_config("x")));
}

TEST_CASE("build writes CSV tables and a manifest that round-trips") {
  TempDir tmp("build");
  const RunConfig cfg = test_config((tmp.path / "out").string());
  std::ostringstream log;
  CHECK(run_build(cfg, log) == 0);

  CHECK(fs::exists(tmp.path / "out" / "v1.csv"));
  CHECK(fs::exists(tmp.path / "out" / "v2.csv"));
  CHECK(fs::exists(tmp.path / "out" / "u_m.csv"));
  CHECK(fs::exists(tmp.path / "out" / "v_l.csv"));
  for (int k = 0; k <= cfg.states; ++k) {
    CHECK(fs::exists(tmp.path / "out" / ("psi_" + std::to_string(k) + ".csv")));
    CHECK(fs::exists(tmp.path / "out" / ("phi_" + std::to_string(k) + ".csv")));
    CHECK(fs::exists(tmp.path / "out" / ("chi_" + std::to_string(k) + ".csv")));
  }

  std::ifstream in(tmp.path / "out" / "manifest.json");
  Json manifest;
  in >> manifest;
  CHECK(config_from_json(manifest.at("config")) == cfg);
  CHECK(manifest.at("files").size() == 4 + 3 * (cfg.states + 1));

  // the manifest itself is accepted as a config file (its embedded config)
  const RunConfig reloaded = load_config_file((tmp.path / "out" / "manifest.json").string());
  CHECK(reloaded == cfg);

  // V2 for (m=0, l=1) is the constant -2/(1+t^2) on every t-slice
  std::ifstream v2(tmp.path / "out" / "v2.csv");
  std::string header;
  std::getline(v2, header);
  CHECK(header == "x,t,value_re,value_im");
  std::string line;
  while (std::getline(v2, line)) {
    std::stringstream ss(line);
    std::string xs, ts, re, im;
    std::getline(ss, xs, ',');
    std::getline(ss, ts, ',');
    std::getline(ss, re, ',');
    std::getline(ss, im, ',');
    const double t = std::stod(ts);
    CHECK(std::abs(std::stod(re) + 2.0 / (1.0 + t * t)) <= 1e-10);
    CHECK(std::abs(std::stod(im)) <= 1e-10);
  }

  // V1 at the t = 0 slice is identically -1
  std::ifstream v1(tmp.path / "out" / "v1.csv");
  std::getline(v1, header);
  while (std::getline(v1, line)) {
    std::stringstream ss(line);
    std::string xs, ts, re;
    std::getline(ss, xs, ',');
    std::getline(ss, ts, ',');
    std::getline(ss, re, ',');
    if (std::stod(ts) == 0.0) CHECK(std::abs(std::stod(re) + 1.0) <= 1e-12);
  }
}

TEST_CASE("verify: clean run exits 0, perturbed potential exits 1") {
  TempDir tmp("verify");
  RunConfig cfg = test_config((tmp.path / "out").string());
  std::ostringstream log;
  CHECK(run_verify(cfg, log) == 0);

  std::ifstream in(tmp.path / "out" / "report.json");
  Json report;
  in >> report;
  CHECK(report.at("passed").get<bool>());
  CHECK(report.at("checks").size() > 30);
  for (const auto& row : report.at("checks")) {
    CHECK(row.contains("max_norm"));
    CHECK(row.contains("tolerance"));
    CHECK(row.contains("worst_point"));
  }

  RunConfig bad = cfg;
  bad.perturb_potential = 0.01;
  std::ostringstream log2;
  CHECK(run_verify(bad, log2) == 1);
  std::ifstream in2(tmp.path / "out" / "report.json");
  Json report2;
  in2 >> report2;
  CHECK(!report2.at("passed").get<bool>());
}

TEST_CASE("spectrum: emits the degeneracy pattern as JSON") {
  TempDir tmp("spectrum");
  RunConfig cfg = test_config((tmp.path / "out").string());
  cfg.states = 8;
  std::ostringstream log;
  CHECK(run_spectrum(cfg, log) == 0);
  std::ifstream in(tmp.path / "out" / "spectrum.json");
  Json j;
  in >> j;
  const auto mult = j.at("multiplicities").get<std::vector<int>>();
  REQUIRE(mult.size() == 8);
  CHECK(mult[0] == 1);
  CHECK(mult[1] == 2);
  CHECK(mult[2] == 3);
  CHECK(mult[3] == 3);
  CHECK(std::abs(j.at("eigenvalues")[0].get<double>() + 1.5) <= 1e-6);
}

TEST_CASE("deterministic reports: identical config produces identical bytes") {
  TempDir tmp("deterministic");
  RunConfig cfg = test_config((tmp.path / "a").string());
  cfg.states = 3;
  std::ostringstream log;
  run_spectrum(cfg, log);
  RunConfig cfg2 = cfg;
  cfg2.out = (tmp.path / "b").string();
  run_spectrum(cfg2, log);
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::string a = slurp(tmp.path / "a" / "spectrum.json");
  std::string b = slurp(tmp.path / "b" / "spectrum.json");
  // the out path differs inside the embedded config; strip those lines
  const auto strip = [](std::string s) {
    std::string out;
    std::stringstream ss(s);
    std::string line;
    while (std::getline(ss, line))
      if (line.find("\"out\"") == std::string::npos) out += line + "\n";
    return out;
  };
  CHECK(strip(a) == strip(b));
}

TEST_CASE("fnv1a64 checksum is stable") {
  CHECK(fnv1a64("") == 14695981039346656037ULL);
  CHECK(fnv1a64("a") == 12638187200555641996ULL);
}
