#include "vorwave/gerstner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vorwave/errors.hpp"

namespace vorwave {

GerstnerWave GerstnerWave::from_steepness(double k, double eps, double g) { return GerstnerWave(k, eps, g); }

GerstnerWave::GerstnerWave(double k, double eps, double g) : k_(k), eps_(eps), g_(g) {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("gerstner: wavenumber must be positive");
  if (!(g > 0.0)) throw DomainError("gerstner: g must be positive");
  if (!(eps > 0.0)) throw DomainError("gerstner: steepness must be positive");
  if (!(eps < 1.0)) throw DomainError("gerstner: steepness must be below 1 (eps = 1 is the cusped wave)");
  b0_ = std::log(eps) / k;
  c_ = std::sqrt(g / k);
}

double GerstnerWave::half_period() const { return std::numbers::pi / k_; }

namespace {

// Everything below depends on b only through e = exp(k b).
struct Label {
  double k, c, e, e0, C, S;
  Label(const GerstnerWave& gw, double a, double b)
      : k(gw.k()), c(gw.speed()), e(std::exp(gw.k() * b)), e0(gw.steepness()),
        C(std::cos(gw.k() * a)), S(std::sin(gw.k() * a)) {}
  double jac() const { return 1.0 - e * e; }
  double psi(double b, double b0) const { return -c * ((b - b0) - (e * e - e0 * e0) / (2.0 * k)); }
  double omega() const { return 2.0 * c * k * e * e / jac(); }
};

}  // namespace

GerstnerPoint gerstner_point(const GerstnerWave& gw, double a, double b, double patm) {
  if (b > gw.b0()) throw DomainError("gerstner: label b above the surface");
  const Label l(gw, a, b);
  GerstnerPoint p;
  p.x = a - l.e / l.k * l.S;
  p.y = b + l.e / l.k * l.C;
  p.u = -l.c * (1.0 - l.e * l.C);
  p.v = l.c * l.e * l.S;
  p.psi = l.psi(b, gw.b0());
  p.P = patm + gw.g() / l.c * p.psi;
  p.omega = l.omega();
  return p;
}

WaveField gerstner_field(const GerstnerWave& gw, int n1, int n2, double patm) {
  const double k = gw.k(), c = gw.speed(), b0 = gw.b0(), bmin = b0 - 4.0 / k;
  const double L = gw.half_period();
  WaveField wf;
  wf.grid = LogicalGrid(n1, n2, L / n1, (b0 - bmin) / n2);
  wf.has_bed = false;
  wf.g = gw.g();
  wf.d = 0.0;
  wf.L = L;
  wf.patm = patm;
  wf.coord1 = "a";
  wf.coord2 = "b";
  const double e0 = gw.steepness();
  wf.Q = 0.5 * c * c * (1.0 + e0 * e0) + gw.g() * b0;

  const int n = wf.nodes();
  for (auto* a : {&wf.c1, &wf.c2, &wf.x, &wf.y, &wf.x1, &wf.x2, &wf.y1, &wf.y2, &wf.jac, &wf.u, &wf.v, &wf.P,
                  &wf.psi, &wf.omega, &wf.ux, &wf.uy, &wf.vx, &wf.vy, &wf.uxx, &wf.uxy, &wf.gam, &wf.dgam,
                  &wf.d2gam, &wf.Gam})
    a->assign(n, 0.0);

  for (int i = 0; i <= n1; ++i)
    for (int j = 0; j <= n2; ++j) {
      const int idx = wf.at(i, j);
      const double a = i * wf.grid.h1();
      const double b = j == n2 ? b0 : bmin + j * wf.grid.h2();
      const Label l(gw, a, b);
      const GerstnerPoint pt = gerstner_point(gw, a, b, patm);
      const double e = l.e, e2 = e * e, J = l.jac();
      wf.c1[idx] = a;
      wf.c2[idx] = b;
      wf.x[idx] = pt.x;
      wf.y[idx] = pt.y;
      wf.x1[idx] = 1.0 - e * l.C;
      wf.x2[idx] = -e * l.S;
      wf.y1[idx] = -e * l.S;
      wf.y2[idx] = 1.0 + e * l.C;
      wf.jac[idx] = J;
      wf.u[idx] = pt.u;
      wf.v[idx] = pt.v;
      wf.P[idx] = pt.P;
      wf.psi[idx] = pt.psi;
      wf.omega[idx] = pt.omega;

      const double cke = c * k * e;
      wf.ux[idx] = -cke * l.S / J;
      wf.uy[idx] = cke * (l.C - e) / J;
      wf.vx[idx] = cke * (l.C + e) / J;
      wf.vy[idx] = cke * l.S / J;
      // u_x as a function of the labels, differentiated once more
      const double Fa = -c * k * k * e * l.C / J;
      const double Fb = -c * k * k * e * l.S * (1.0 + e2) / (J * J);
      wf.uxx[idx] = (Fa * wf.y2[idx] - Fb * wf.y1[idx]) / J;
      wf.uxy[idx] = (wf.x1[idx] * Fb - wf.x2[idx] * Fa) / J;

      wf.gam[idx] = pt.omega;
      wf.dgam[idx] = -4.0 * k * k * e2 / (J * J * J);
      wf.d2gam[idx] = 8.0 * k * k * k * e2 * (1.0 + 2.0 * e2) / (c * std::pow(J, 5));
      wf.Gam[idx] = c * c * (e2 - e0 * e0);
    }
  wf.m = wf.psi[wf.at(0, 0)];

  wf.eta.resize(n1 + 1);
  wf.eta_x.resize(n1 + 1);
  wf.eta_xx.resize(n1 + 1);
  for (int i = 0; i <= n1; ++i) {
    const int s = wf.surface(i);
    const double C = std::cos(k * wf.c1[s]);
    wf.eta[i] = wf.y[s];
    wf.eta_x[i] = wf.v[s] / wf.u[s];
    wf.eta_xx[i] = k * e0 * (e0 - C) / std::pow(1.0 - e0 * C, 3);
  }
  return wf;
}

GerstnerSlope gerstner_max_slope(const GerstnerWave& gw) {
  const double e = gw.steepness();
  GerstnerSlope s;
  s.angle_deg = std::atan(e / std::sqrt(1.0 - e * e)) * 180.0 / std::numbers::pi;
  s.a = std::acos(e) / gw.k();
  return s;
}

double gerstner_euler_residual(const GerstnerWave& gw, double a, double b, double step) {
  if (b + step > gw.b0()) throw DomainError("gerstner: residual stencil crosses the surface");
  const GerstnerPoint pa = gerstner_point(gw, a + step, b), ma = gerstner_point(gw, a - step, b);
  const GerstnerPoint pb = gerstner_point(gw, a, b + step), mb = gerstner_point(gw, a, b - step);
  const GerstnerPoint o = gerstner_point(gw, a, b);
  const double h2 = 2.0 * step;
  const double xa = (pa.x - ma.x) / h2, xb = (pb.x - mb.x) / h2;
  const double ya = (pa.y - ma.y) / h2, yb = (pb.y - mb.y) / h2;
  const double J = xa * yb - xb * ya;
  auto ddx = [&](double fa, double fb) { return (fa * yb - fb * ya) / J; };
  auto ddy = [&](double fa, double fb) { return (xa * fb - xb * fa) / J; };
  const double ua = (pa.u - ma.u) / h2, ub = (pb.u - mb.u) / h2;
  const double va = (pa.v - ma.v) / h2, vb = (pb.v - mb.v) / h2;
  const double Pa = (pa.P - ma.P) / h2, Pb = (pb.P - mb.P) / h2;
  const double ru = o.u * ddx(ua, ub) + o.v * ddy(ua, ub) + ddx(Pa, Pb);
  const double rv = o.u * ddx(va, vb) + o.v * ddy(va, vb) + ddy(Pa, Pb) + gw.g();
  return std::max(std::abs(ru), std::abs(rv));
}

GerstnerSummary summarize_gerstner(const GerstnerWave& gw, const WaveField& wf) {
  GerstnerSummary s;
  s.max_slope_deg = gerstner_max_slope(gw).angle_deg;
  const int n1 = wf.grid.N1(), n2 = wf.grid.N2();
  bool neg = false, pos = false;
  for (int i = 0; i <= n1; ++i) {
    const int k = wf.surface(i);
    s.sampled_slope_deg = std::max(s.sampled_slope_deg, std::atan(std::abs(wf.v[k] / wf.u[k])) * 180.0 / std::numbers::pi);
    neg = neg || wf.u[k] < 0.0;
    pos = pos || wf.u[k] > 0.0;
  }
  s.overturning = neg && pos;
  s.min_omega = *std::min_element(wf.omega.begin(), wf.omega.end());
  for (int i = 1; i < n1; ++i)
    for (int j = 1; j < n2; ++j) {
      const int k = wf.at(i, j);
      s.max_euler_residual = std::max(s.max_euler_residual, gerstner_euler_residual(gw, wf.c1[k], wf.c2[k]));
    }
  return s;
}

}  // namespace vorwave
