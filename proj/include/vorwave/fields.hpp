#pragma once

#include <string>
#include <vector>

#include "vorwave/strip_solver.hpp"

namespace vorwave {

// Symmetry of a node array about the lateral edges of the half period.
// Odd arrays are reflected about their edge value (F_ghost = 2 F_edge - F_mirror).
enum class Parity { even, odd };

inline Parity flip(Parity p) { return p == Parity::even ? Parity::odd : Parity::even; }

// Uniform logical grid with (N1+1) x (N2+1) nodes, stored direction-1 major.
// Direction 1 (along the wave) closes by reflection; direction 2 (bed or bottom
// to surface) by the kEdgeWeights one-sided stencils, so operators compose
// without losing order at the edge rows.
class LogicalGrid {
 public:
  LogicalGrid() = default;
  LogicalGrid(int n1, int n2, double h1, double h2);

  int N1() const { return n1_; }
  int N2() const { return n2_; }
  double h1() const { return h1_; }
  double h2() const { return h2_; }
  int size() const { return (n1_ + 1) * (n2_ + 1); }
  int index(int i, int j) const { return i * (n2_ + 1) + j; }

  std::vector<double> d1(const std::vector<double>& f, Parity parity) const;
  std::vector<double> d2(const std::vector<double>& f) const;

 private:
  int n1_ = 0, n2_ = 0;
  double h1_ = 1.0, h2_ = 1.0;
};

struct WaveField {
  LogicalGrid grid;
  bool has_bed = true;
  double g = 9.81;
  double Q = 0.0;
  double d = 0.0;
  double L = 0.0;  // half period
  double m = 0.0;
  double patm = 0.0;
  std::string coord1 = "q", coord2 = "p";

  std::vector<double> c1, c2;  // logical coordinates of each node
  std::vector<double> x, y, x1, x2, y1, y2, jac;
  std::vector<double> u, v, P, psi, omega;
  std::vector<double> ux, uy, vx, vy, uxx, uxy;
  // vorticity function evaluated along each node's streamline and Gamma(-psi)
  std::vector<double> gam, dgam, d2gam, Gam;
  // surface row
  std::vector<double> eta, eta_x, eta_xx;

  int nodes() const { return grid.size(); }
  int at(int i, int j) const { return grid.index(i, j); }
  int surface(int i) const { return grid.index(i, grid.N2()); }

  std::vector<double> dx(const std::vector<double>& f, Parity parity) const;
  std::vector<double> dy(const std::vector<double>& f, Parity parity) const;
  // derivative along the surface row with respect to x
  std::vector<double> surface_dx(const std::vector<double>& f, Parity parity) const;

  // fills jac, velocity derivatives and omega from x, y, u, v
  void derive();
};

WaveField reconstruct(const HeightField& hf);

struct SurfaceTrace {
  std::vector<double> x, u, v, ux, vx, uy, uxx, uxy;
};

SurfaceTrace surface_trace(const WaveField& wf);

// Max-norm consistency residuals of a reconstructed field.
struct FieldConsistency {
  double euler_u = 0.0;      // u u_x + v u_y + P_x
  double euler_v = 0.0;      // u v_x + v v_y + P_y + g
  double divergence = 0.0;   // u_x + v_y
  double psi_y = 0.0;        // psi_y - u
  double psi_x = 0.0;        // psi_x + v
  double kinematic = 0.0;    // v - eta_x u on the surface
  double dynamic = 0.0;      // P - patm on the surface
  double mean_eta = 0.0;     // trapezoid mean of eta
  double vorticity = 0.0;    // omega - gamma(psi)
  double euler() const { return euler_u > euler_v ? euler_u : euler_v; }
};

FieldConsistency field_consistency(const WaveField& wf, int margin = 0);

void write_field_csv(const WaveField& wf, const std::string& path, bool with_vorticity_columns = false);

struct CsvFieldInputs {
  double g = 9.81;
  double L = 0.0;
  double m = 0.0;
  const VorticityFunction* vf = nullptr;  // required unless the CSV carries gamma columns
};

WaveField read_field_csv(const std::string& path, const CsvFieldInputs& in);

}  // namespace vorwave
