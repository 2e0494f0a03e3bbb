#pragma once

#include <limits>
#include <string>
#include <vector>

#include "vorwave/grid.hpp"
#include "vorwave/vorticity.hpp"

namespace vorwave {

struct HeightField {
  StripGrid grid;
  VorticityFunction vf = VorticityFunction::constant(0.0, 1.0);
  double g = 9.81;
  std::vector<double> h;  // grid.nodes() values, bed row identically 0
  double Q = 0.0;
  double arclength = 0.0;

  double at(int i, int j) const { return h[grid.index(i, j)]; }
  double& at(int i, int j) { return h[grid.index(i, j)]; }
  // crest-minus-trough surface height
  double amplitude() const { return at(0, grid.Np) - at(grid.Nq, grid.Np); }
};

HeightField make_height_field(const StripGrid& grid, const VorticityFunction& vf, double g);

// h_p at every node with the solver's stencils (kEdgeWeights at p = -m and p = 0)
std::vector<double> height_p(const HeightField& hf);
// u = -1/h_p at every node
std::vector<double> relative_speed_u(const HeightField& hf);

// Interior PDE on rows 1..Np-1, Bernoulli on row Np, h itself on the bed row.
// Throws StagnationError if h_p <= 0 anywhere.
std::vector<double> residual(const HeightField& hf);

enum class ConstraintKind { fixed_Q, fixed_amplitude, arclength };

struct Constraint {
  ConstraintKind kind = ConstraintKind::fixed_Q;
  double value = 0.0;  // Q, amplitude, or step length
  // arclength only: base point and unit tangent packed as (h unknowns..., Q)
  std::vector<double> base;
  std::vector<double> tangent;
};

struct NewtonOptions {
  int max_iterations = 50;
  int max_halvings = 30;
  double hp_min = 1e-8;
  double tol_factor = 1e-10;
  // give up once the residual has grown by this factor over the initial one
  double divergence_factor = std::numeric_limits<double>::infinity();
};

struct NewtonResult {
  HeightField field;
  int iterations = 0;
  double residual_norm = 0.0;
};

NewtonResult newton_solve(const HeightField& initial, const Constraint& constraint,
                          const NewtonOptions& opts = {});

// Unknown vector <-> field. Unknowns are h at rows 1..Np (p fastest), then Q.
std::vector<double> pack_unknowns(const HeightField& hf);
void unpack_unknowns(const std::vector<double>& x, HeightField& hf);
// weights of the inner product used by the arclength constraint
std::vector<double> arclength_weights(const StripGrid& grid);

// Analytic Jacobian of (residual rows at unknown nodes, constraint) in CSR-free
// triplet-expanded dense form; for tests on small grids only.
std::vector<std::vector<double>> dense_jacobian(const HeightField& hf, const Constraint& c);
std::vector<double> system_residual(const HeightField& hf, const Constraint& c);

// Discrete laminar solution for surface speed squared lambda: h = H(p) with the
// one-sided surface derivative equal to 1/sqrt(lambda); Q = lambda/2 + g H(0).
HeightField discrete_laminar(const StripGrid& grid, const VorticityFunction& vf, double g, double lambda);

struct Bifurcation {
  double lambda_star = 0.0;
  double lambda_c = 0.0;
  HeightField laminar;
  std::vector<double> mode;  // phi(p_j), j = 0..Np, normalized to phi(0) = 1
};

// Bisects on the sign of det of the transverse-mode operator for cos(pi q / L).
// Defaults scan from lambda_c down to the admissible threshold.
Bifurcation find_bifurcation(const StripGrid& grid, const VorticityFunction& vf, double g,
                             double lambda_lo = std::numeric_limits<double>::quiet_NaN(),
                             double lambda_hi = std::numeric_limits<double>::quiet_NaN());

// Sign of det M(lambda) of the mode operator, exposed for tests.
int mode_determinant_sign(const StripGrid& grid, const VorticityFunction& vf, double g, double lambda);

struct ContinuationOptions {
  int steps = 25;
  double ds0 = 0.005;
  double ds_max = 0.005;
  double eps_stag = std::numeric_limits<double>::quiet_NaN();  // default 0.05 sqrt(lambda*)
  double trough_margin = 0.0;
  int max_halvings = 8;
  int newton_max_iterations = 15;
  int fast_iterations = 4;
  double growth = 1.3;
};

struct BranchPoint {
  HeightField field;
  double Q = 0.0;
  double amplitude = 0.0;
  double step = 0.0;  // arclength step that produced this point
  int newton_iterations = 0;
  double max_u = 0.0;
  double trough_value = 0.0;  // g - gamma(0) u at the trough
};

struct Branch {
  std::vector<BranchPoint> points;  // points[0] is the trivial wave
  double lambda_star = 0.0;
  double lambda_c = 0.0;
  double eps_stag = 0.0;
  std::string stop_reason;
};

Branch continue_branch(const StripGrid& grid, const VorticityFunction& vf, double g,
                       const ContinuationOptions& opts = {});

// Single-point helpers used by continuation and the refinement studies.
HeightField seed_from_mode(const Bifurcation& bif, double amplitude);
double trough_vortex_value(const HeightField& hf);

}  // namespace vorwave
