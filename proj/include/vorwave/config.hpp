#pragma once

#include <string>
#include <vector>

#include "vorwave/audit.hpp"
#include "vorwave/strip_solver.hpp"

namespace vorwave {

struct VorticitySpec {
  VorticityKind kind = VorticityKind::constant;
  double gamma = 0.0;               // constant
  std::vector<double> coefficients;  // polynomial, lowest degree first
  std::vector<double> samples;       // tabulated, uniform in psi on [0, m]
};

struct GerstnerConfig {
  double k = 1.0;
  double eps = 0.5;
  int n_a = 128;
  int n_b = 96;
};

struct RunConfig {
  double g = 9.81;
  double L = 3.141592653589793;
  double m = 1.0;
  VorticitySpec vorticity;
  int Nq = 64;
  int Np = 48;
  double stretching = 0.0;
  ContinuationOptions continuation;
  AuditTolerances tolerances;
  GerstnerConfig gerstner;
  std::string out = "vorwave_out";

  VorticityFunction vorticity_function() const;
  StripGrid grid() const;
};

// Throws ConfigError on malformed JSON, unknown keys, or out-of-range values.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// Canonical JSON of the resolved configuration (all defaults filled in).
std::string config_json(const RunConfig& cfg, int indent = 2);

}  // namespace vorwave
