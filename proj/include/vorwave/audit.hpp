#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "vorwave/fields.hpp"
#include "vorwave/vorticity.hpp"

namespace vorwave {

enum class AuditStatus { pass, fail, boundary, not_applicable, info };

std::string to_string(AuditStatus s);

struct Diagnostic {
  std::string id;
  std::string description;
  std::string paper_ref;
  AuditStatus status = AuditStatus::not_applicable;
  double value = std::numeric_limits<double>::quiet_NaN();
  double q = std::numeric_limits<double>::quiet_NaN();  // location in logical coordinates
  double p = std::numeric_limits<double>::quiet_NaN();
  double margin = std::numeric_limits<double>::quiet_NaN();
  double tolerance = 0.0;
  std::string reason;  // set for not-applicable and failures
  std::vector<std::pair<std::string, double>> extras;

  double extra(const std::string& key) const;
};

struct AuditSummary {
  int pass = 0, fail = 0, boundary = 0, na = 0, info = 0;
};

struct AuditReport {
  std::vector<Diagnostic> diagnostics;
  AuditSummary summary;
  bool trivial = false;

  const Diagnostic& get(const std::string& id) const;
  bool ok() const { return summary.fail == 0; }
};

// NaN entries are resolved from the field: bern = 1e-6 Q, eq = 1e-6 g d,
// residual = residual_constant * delta^2 with delta = 1/min(N1, N2).
struct AuditTolerances {
  double bern = std::numeric_limits<double>::quiet_NaN();
  double eq = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();
  double residual_constant = 50.0;
  double v_floor = 1e-6;        // relative to max |u|
  double dynamic = 1e-9;        // relative to max(1, Q)
  double trivial_amplitude = 1e-9;  // relative to max(1, d)
};

struct AuditOptions {
  AuditTolerances tol;
  // laminar critical head for the crest-speed bound; NaN skips that sub-check
  double lambda_c = std::numeric_limits<double>::quiet_NaN();
  int mastergam_samples = 2001;
};

// The vorticity function, when given, is used for the sign hypotheses and lambda_c;
// otherwise the per-node gamma arrays of the field are sampled.
AuditReport audit_wave(const WaveField& wf, const VorticityFunction* vf = nullptr, const AuditOptions& opts = {});

// dP/dn along the surface row with outward normal (v,-u)/|(u,v)|
std::vector<double> pressure_normal_derivative(const WaveField& wf);

struct SurfaceCurve {
  std::vector<double> label;  // logical coordinate over one full period
  std::vector<double> X, Y, theta, dtheta_ds, speed, dPdn;
  int winding = 0;
};

// Free surface over a full period, built from the half period by symmetry.
SurfaceCurve surface_curve(const WaveField& wf);

std::string report_json(const AuditReport& report, int indent = 2);

}  // namespace vorwave
