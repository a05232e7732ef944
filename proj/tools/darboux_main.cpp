#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "darboux/cli.hpp"

namespace {

struct Overrides {
  std::optional<int> m, l, states, nx;
  std::optional<double> zmax, tol_analytic, tol_quadrature, perturb;
  std::optional<std::string> t_samples, out, config;
};

void add_common_options(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--config", ov.config, "JSON config file; flags override its values");
  cmd->add_option("--m", ov.m, "even index of the first transformation function");
  cmd->add_option("--l", ov.l, "index of the second transformation function (m+1, m+3, ...)");
  cmd->add_option("--states", ov.states, "number of basis states per level");
  cmd->add_option("--zmax", ov.zmax, "half-width of the scaled grid");
  cmd->add_option("--nx", ov.nx, "number of grid nodes (odd, >= 257)");
  cmd->add_option("--t-samples", ov.t_samples, "comma-separated list of t samples");
  cmd->add_option("--tol-analytic", ov.tol_analytic, "tolerance for identities with analytic derivatives");
  cmd->add_option("--tol-quadrature", ov.tol_quadrature, "tolerance for quadrature-based checks");
  cmd->add_option("--out", ov.out, "output directory");
  cmd->add_option("--perturb-potential", ov.perturb, "test-only negative control: adds eps to the potentials");
}

std::vector<double> parse_samples(const std::string& s) {
  std::vector<double> r;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) r.push_back(std::stod(item));
  }
  if (r.empty()) throw std::invalid_argument("--t-samples needs at least one value");
  return r;
}

dbx::cli::RunConfig resolve(const Overrides& ov) {
  dbx::cli::RunConfig cfg;
  if (ov.config) cfg = dbx::cli::load_config_file(*ov.config);
  if (ov.m) cfg.m = *ov.m;
  if (ov.l) cfg.l = *ov.l;
  if (ov.states) cfg.states = *ov.states;
  if (ov.zmax) cfg.zmax = *ov.zmax;
  if (ov.nx) cfg.nx = *ov.nx;
  if (ov.t_samples) cfg.t_samples = parse_samples(*ov.t_samples);
  if (ov.tol_analytic) cfg.tol_analytic = *ov.tol_analytic;
  if (ov.tol_quadrature) cfg.tol_quadrature = *ov.tol_quadrature;
  if (ov.out) cfg.out = *ov.out;
  if (ov.perturb) cfg.perturb_potential = *ov.perturb;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exactly solvable time-dependent potentials from Darboux chains, with verification"};
  app.require_subcommand(1);

  Overrides ov;
  CLI::App* build = app.add_subcommand("build", "export potentials and eigenfunctions as CSV + manifest");
  CLI::App* verify = app.add_subcommand("verify", "run the full verification suite; exit 0 iff all pass");
  CLI::App* spectrum = app.add_subcommand("spectrum", "emit the degeneracy report of the super-operator");
  for (CLI::App* cmd : {build, verify, spectrum}) add_common_options(cmd, ov);

  CLI11_PARSE(app, argc, argv);

  try {
    const dbx::cli::RunConfig cfg = resolve(ov);
    if (build->parsed()) return dbx::cli::run_build(cfg, std::cout);
    if (verify->parsed()) return dbx::cli::run_verify(cfg, std::cout);
    if (spectrum->parsed()) return dbx::cli::run_spectrum(cfg, std::cout);
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
