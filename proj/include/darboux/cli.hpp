#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "darboux/model.hpp"

namespace dbx::cli {

using Json = nlohmann::ordered_json;

struct RunConfig {
  int m = 0;
  int l = 1;
  int states = 6;
  double zmax = 10.0;
  int nx = 1025;
  std::vector<double> t_samples = {0.0, -0.5, 0.5, -2.0, 2.0};
  double tol_analytic = 1e-8;
  double tol_quadrature = 1e-6;
  std::string out = "out";
  double perturb_potential = 0.0;  // test-only negative control

  bool operator==(const RunConfig&) const = default;
};

Json config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const Json& j);
RunConfig load_config_file(const std::string& path);

/// Parity/range validation; throws std::invalid_argument (exit code 2).
void validate(const RunConfig& cfg);
ModelConfig to_model_config(const RunConfig& cfg);

/// Exports CSV tables for the potentials, bases and transformation functions
/// plus a JSON manifest with the config and file checksums.
int run_build(const RunConfig& cfg, std::ostream& log);

/// Runs the full verification suite; writes report.json; returns 0 iff every
/// check passed, 1 otherwise.
int run_verify(const RunConfig& cfg, std::ostream& log);

/// Emits the spectrum report as JSON (stdout log + spectrum.json).
int run_spectrum(const RunConfig& cfg, std::ostream& log);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace dbx::cli
