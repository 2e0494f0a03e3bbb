#pragma once

#include "vorwave/fields.hpp"

namespace vorwave {

// Trochoidal deep-water wave in the frame moving with speed c. Particles keep
// their label b and advance in the label a; b = b0 is the free surface.
class GerstnerWave {
 public:
  // steepness eps = exp(k b0) must lie in (0, 1)
  static GerstnerWave from_steepness(double k, double eps, double g = 9.81);

  double k() const { return k_; }
  double b0() const { return b0_; }
  double steepness() const { return eps_; }
  double speed() const { return c_; }
  double g() const { return g_; }
  double half_period() const;

 private:
  GerstnerWave(double k, double eps, double g);
  double k_, eps_, b0_, c_, g_;
};

struct GerstnerPoint {
  double x, y, u, v, P, psi, omega;
};

// Closed-form state at label (a, b), b <= b0; P includes patm.
GerstnerPoint gerstner_point(const GerstnerWave& gw, double a, double b, double patm = 0.0);

// Label grid a in [0, pi/k] with n1 intervals, b in [b0 - 4/k, b0] with n2.
WaveField gerstner_field(const GerstnerWave& gw, int n1, int n2, double patm = 0.0);

struct GerstnerSlope {
  double angle_deg = 0.0;
  double a = 0.0;  // surface label of the steepest point
};

GerstnerSlope gerstner_max_slope(const GerstnerWave& gw);

// Steady Euler residual max(|u u_x + v u_y + P_x|, |u v_x + v v_y + P_y + g|) at one
// label, with every derivative taken by central differences of the closed forms.
double gerstner_euler_residual(const GerstnerWave& gw, double a, double b, double step = 1e-5);

struct GerstnerSummary {
  double max_slope_deg = 0.0;      // closed form
  double sampled_slope_deg = 0.0;  // max atan|v/u| over the surface row
  double min_omega = 0.0;
  double max_euler_residual = 0.0;  // interior nodes, finite-difference oracle
  bool overturning = false;         // u changes sign on the surface
};

GerstnerSummary summarize_gerstner(const GerstnerWave& gw, const WaveField& wf);

}  // namespace vorwave
