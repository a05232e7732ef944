#include "darboux/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "darboux/suite.hpp"

namespace dbx::cli {
namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct CsvFile {
  std::string name;
  long rows = 0;
  std::uint64_t checksum = 0;
};

CsvFile write_field_csv(const fs::path& dir, const std::string& name, const ClosedFormField& f,
                        const Grid& grid) {
  std::ostringstream body;
  body << "x,t,value_re,value_im\n";
  long rows = 0;
  for (double t : grid.t_samples) {
    for (double z : grid.z_nodes) {
      const double x = z * grid.scale(t);
      const Complex v = f.value(x, t);
      body << fmt(x) << "," << fmt(t) << "," << fmt(v.real()) << "," << fmt(v.imag()) << "\n";
      ++rows;
    }
  }
  const std::string text = body.str();
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  out << text;
  return {name, rows, fnv1a64(text)};
}

Json report_row(const ResidualReport& r) {
  Json j;
  j["name"] = r.name;
  j["max_norm"] = r.max_norm;
  j["l2_norm"] = r.l2_norm;
  j["tolerance"] = r.tolerance;
  j["passed"] = r.passed;
  j["worst_point"] = Json{{"x", r.worst_x}, {"t", r.worst_t}};
  return j;
}

void write_json(const fs::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Json config_to_json(const RunConfig& cfg) {
  Json j;
  j["m"] = cfg.m;
  j["l"] = cfg.l;
  j["states"] = cfg.states;
  j["grid"] = Json{{"zmax", cfg.zmax}, {"nx", cfg.nx}, {"t_samples", cfg.t_samples}};
  j["tolerances"] = Json{{"analytic", cfg.tol_analytic}, {"quadrature", cfg.tol_quadrature}};
  j["out"] = cfg.out;
  j["perturb_potential"] = cfg.perturb_potential;
  return j;
}

RunConfig config_from_json(const Json& j) {
  RunConfig cfg;
  cfg.m = j.value("m", cfg.m);
  cfg.l = j.value("l", cfg.l);
  cfg.states = j.value("states", cfg.states);
  if (j.contains("grid")) {
    const Json& g = j.at("grid");
    cfg.zmax = g.value("zmax", cfg.zmax);
    cfg.nx = g.value("nx", cfg.nx);
    if (g.contains("t_samples")) cfg.t_samples = g.at("t_samples").get<std::vector<double>>();
  }
  if (j.contains("tolerances")) {
    const Json& t = j.at("tolerances");
    cfg.tol_analytic = t.value("analytic", cfg.tol_analytic);
    cfg.tol_quadrature = t.value("quadrature", cfg.tol_quadrature);
  }
  cfg.out = j.value("out", cfg.out);
  cfg.perturb_potential = j.value("perturb_potential", cfg.perturb_potential);
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file " + path);
  Json j;
  in >> j;
  // a build manifest embeds the config it was produced with; accept it too
  if (!j.contains("m") && j.contains("config")) return config_from_json(j.at("config"));
  return config_from_json(j);
}

void validate(const RunConfig& cfg) {
  fields::validate_model_indices(cfg.m, cfg.l);
  if (cfg.states < 3) throw std::invalid_argument("states must be >= 3");
  Grid::make(cfg.zmax, cfg.nx, cfg.t_samples);  // throws on bad grid parameters
}

ModelConfig to_model_config(const RunConfig& cfg) {
  validate(cfg);
  ModelConfig mc;
  mc.m = cfg.m;
  mc.l = cfg.l;
  mc.states = cfg.states;
  mc.grid = Grid::make(cfg.zmax, cfg.nx, cfg.t_samples);
  mc.perturbation = cfg.perturb_potential;
  mc.tol_analytic = cfg.tol_analytic;
  mc.tol_quadrature = cfg.tol_quadrature;
  return mc;
}

int run_build(const RunConfig& cfg, std::ostream& log) {
  const FreeParticleModel md = build_model(to_model_config(cfg));
  const fs::path dir = cfg.out;
  fs::create_directories(dir);

  std::vector<CsvFile> files;
  const auto as_field = [](const PotentialField& v) {
    return ClosedFormField{v.label, [v](double x, double t, int o) { return v.jet(x, t, o); }};
  };
  files.push_back(write_field_csv(dir, "v1.csv", as_field(md.V1), md.cfg.grid));
  files.push_back(write_field_csv(dir, "v2.csv", as_field(md.V2), md.cfg.grid));
  files.push_back(write_field_csv(dir, "u_m.csv", md.u_m, md.cfg.grid));
  files.push_back(write_field_csv(dir, "v_l.csv", md.v_l, md.cfg.grid));
  for (int k = 0; k <= cfg.states; ++k) {
    files.push_back(write_field_csv(dir, "psi_" + std::to_string(k) + ".csv", md.psi[k], md.cfg.grid));
    files.push_back(write_field_csv(dir, "phi_" + std::to_string(k) + ".csv", md.phi[k], md.cfg.grid));
    files.push_back(write_field_csv(dir, "chi_" + std::to_string(k) + ".csv", md.chi[k], md.cfg.grid));
  }

  Json manifest;
  manifest["tool"] = "darboux";
  manifest["config"] = config_to_json(cfg);
  Json jfiles = Json::array();
  for (const CsvFile& f : files) {
    char hex[24];
    std::snprintf(hex, sizeof(hex), "0x%016llx", static_cast<unsigned long long>(f.checksum));
    jfiles.push_back(Json{{"name", f.name}, {"rows", f.rows}, {"fnv1a64", hex}});
  }
  manifest["files"] = jfiles;
  write_json(dir / "manifest.json", manifest);
  log << "wrote " << files.size() << " CSV tables and manifest.json to " << dir.string() << "\n";
  return 0;
}

int run_verify(const RunConfig& cfg, std::ostream& log) {
  const FreeParticleModel md = build_model(to_model_config(cfg));
  const std::vector<ResidualReport> checks = run_check_suite(md);

  bool all_passed = true;
  Json rows = Json::array();
  for (const ResidualReport& r : checks) {
    all_passed = all_passed && r.passed;
    rows.push_back(report_row(r));
    log << (r.passed ? "[ok]   " : "[FAIL] ") << r.name << "  max=" << r.max_norm << " tol=" << r.tolerance
        << "\n";
  }
  Json report;
  report["config"] = config_to_json(cfg);
  report["checks"] = rows;
  report["passed"] = all_passed;
  const fs::path dir = cfg.out;
  fs::create_directories(dir);
  write_json(dir / "report.json", report);
  log << (all_passed ? "verification passed" : "verification FAILED") << " (" << checks.size()
      << " checks); report.json written to " << dir.string() << "\n";
  return all_passed ? 0 : 1;
}

int run_spectrum(const RunConfig& cfg, std::ostream& log) {
  validate(cfg);
  const Grid grid = Grid::make(cfg.zmax, cfg.nx, cfg.t_samples);
  QuadratureRule rule;
  rule.convergence_tol = cfg.tol_quadrature;
  const SpectrumReport sp = spectrum_report(cfg.m, cfg.l, cfg.states, grid, rule);

  Json j;
  j["config"] = config_to_json(cfg);
  j["eigenvalues"] = sp.eigenvalues;
  j["multiplicities"] = sp.multiplicities;
  j["residuals"] = sp.residuals;
  j["rayleigh_values"] = sp.rayleigh_values;
  const fs::path dir = cfg.out;
  fs::create_directories(dir);
  write_json(dir / "spectrum.json", j);
  log << j.dump(2) << "\n";
  return 0;
}

}  // namespace dbx::cli
