#include "vorwave/audit.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numbers>

#include <json.hpp>

#include "vorwave/errors.hpp"
#include "vorwave/laminar.hpp"

namespace vorwave {

std::string to_string(AuditStatus s) {
  switch (s) {
    case AuditStatus::pass: return "pass";
    case AuditStatus::fail: return "fail";
    case AuditStatus::boundary: return "boundary";
    case AuditStatus::not_applicable: return "not-applicable";
    case AuditStatus::info: return "info";
  }
  return "unknown";
}

double Diagnostic::extra(const std::string& key) const {
  for (const auto& [k, v] : extras)
    if (k == key) return v;
  throw NotFoundError("diagnostic " + id + " has no value " + key);
}

const Diagnostic& AuditReport::get(const std::string& id) const {
  for (const auto& d : diagnostics)
    if (d.id == id) return d;
  throw NotFoundError("audit report has no diagnostic " + id);
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// max |residual| over a node set, normalized by the largest term magnitude seen
struct Residual {
  double res = 0.0, scale = 0.0;
  int at = -1;
  void add(int k, double r, std::initializer_list<double> terms) {
    if (!(std::abs(r) <= res)) {
      res = std::abs(r);
      at = k;
    }
    for (double t : terms) scale = std::max(scale, std::abs(t));
  }
  // floor keeps a wave with vanishing terms (the trivial one) from normalizing roundoff to 1
  double normalized(double floor = 0.0) const {
    const double s = std::max(scale, floor);
    return s > 0.0 ? res / s : res;
  }
};

// running extremum with location
struct Extremum {
  double value;
  int at = -1;
  bool is_max;
  explicit Extremum(bool max) : value(max ? -HUGE_VAL : HUGE_VAL), is_max(max) {}
  void add(int k, double v) {
    if (at < 0 || (is_max ? v > value : v < value)) {
      value = v;
      at = k;
    }
  }
};

AuditStatus positive(double v) {
  if (v > 0.0) return AuditStatus::pass;
  if (v == 0.0) return AuditStatus::boundary;
  return AuditStatus::fail;
}

AuditStatus all_of(std::initializer_list<AuditStatus> parts) {
  AuditStatus out = AuditStatus::pass;
  for (AuditStatus s : parts) {
    if (s == AuditStatus::fail) return AuditStatus::fail;
    if (s == AuditStatus::boundary) out = AuditStatus::boundary;
  }
  return out;
}

AuditStatus within(double v, double tol) { return v <= tol ? AuditStatus::pass : AuditStatus::fail; }

class Auditor {
 public:
  Auditor(const WaveField& wf, const VorticityFunction* vf, const AuditOptions& opts)
      : wf_(wf), vf_(vf), opts_(opts), n1_(wf.grid.N1()), n2_(wf.grid.N2()) {
    const int n = wf.nodes();
    auto require = [&](const std::vector<double>& a, const char* name) {
      if (static_cast<int>(a.size()) != n) throw PreconditionError(std::string("audit: missing array ") + name);
    };
    require(wf.u, "u");
    require(wf.v, "v");
    require(wf.P, "P");
    require(wf.psi, "psi");
    require(wf.ux, "ux");
    require(wf.uy, "uy");
    require(wf.vx, "vx");
    require(wf.vy, "vy");
    require(wf.uxx, "uxx");
    require(wf.uxy, "uxy");
    require(wf.gam, "gamma");
    require(wf.dgam, "dgamma");
    require(wf.d2gam, "d2gamma");
    require(wf.Gam, "Gamma");
    require(wf.jac, "metric");
    if (static_cast<int>(wf.eta.size()) != n1_ + 1 || static_cast<int>(wf.eta_x.size()) != n1_ + 1 ||
        static_cast<int>(wf.eta_xx.size()) != n1_ + 1)
      throw PreconditionError("audit: missing surface arrays");

    P_.resize(n);
    V2_.resize(n);
    for (int k = 0; k < n; ++k) {
      P_[k] = wf.P[k] - wf.patm;
      V2_[k] = wf.u[k] * wf.u[k] + wf.v[k] * wf.v[k];
    }

    eta_max_ = *std::max_element(wf.eta.begin(), wf.eta.end());
    eta_min_ = *std::min_element(wf.eta.begin(), wf.eta.end());
    trivial_ = (eta_max_ - eta_min_) <= opts.tol.trivial_amplitude * std::max(1.0, std::abs(wf.d));

    ell_ = wf.has_bed ? wf.d : wf.L / std::numbers::pi;
    tol_ = opts.tol;
    if (std::isnan(tol_.bern)) tol_.bern = 1e-6 * std::abs(wf.Q);
    if (std::isnan(tol_.eq)) tol_.eq = 1e-6 * wf.g * ell_;
    if (std::isnan(tol_.residual)) {
      const double delta = 1.0 / std::min(n1_, n2_);
      tol_.residual = tol_.residual_constant * delta * delta;
    }
    lambda_c_ = opts.lambda_c;
    if (std::isnan(lambda_c_) && vf_ && wf.has_bed) lambda_c_ = lambda_c(*vf_, wf.g);
  }

  AuditReport run() {
    hypotheses();
    slope_and_sigma();
    ux_sign();
    f_function();
    alpha_identity();
    w_equation();
    w_on_bed();
    s_equation();
    surface_identities();
    abc();
    pressure_bounds();
    pressure_top();
    speed_extrema();
    bernoulli();
    reduce();
    monotone_u2();
    angle();
    overturn();
    informational();

    for (const auto& d : report_.diagnostics) {
      switch (d.status) {
        case AuditStatus::pass: ++report_.summary.pass; break;
        case AuditStatus::fail: ++report_.summary.fail; break;
        case AuditStatus::boundary: ++report_.summary.boundary; break;
        case AuditStatus::not_applicable: ++report_.summary.na; break;
        case AuditStatus::info: ++report_.summary.info; break;
      }
    }
    report_.trivial = trivial_;
    return std::move(report_);
  }

 private:
  const WaveField& wf_;
  const VorticityFunction* vf_;
  const AuditOptions& opts_;
  AuditTolerances tol_;
  int n1_, n2_;
  std::vector<double> P_, V2_;
  double eta_max_ = 0.0, eta_min_ = 0.0, lambda_c_ = kNaN, ell_ = 1.0;
  bool trivial_ = false;
  bool nostag_ = false, mastergam_ = false, mono_ = false, trough_ = false;
  bool main_ = false;
  std::string main_reason_;
  AuditReport report_;

  int at(int i, int j) const { return wf_.at(i, j); }
  int surf(int i) const { return wf_.surface(i); }

  Diagnostic& add(const std::string& id, const std::string& description, const std::string& ref) {
    Diagnostic d;
    d.id = id;
    d.description = description;
    d.paper_ref = ref;
    report_.diagnostics.push_back(std::move(d));
    return report_.diagnostics.back();
  }

  void locate(Diagnostic& d, int k) const {
    if (k < 0) return;
    d.q = wf_.c1[k];
    d.p = wf_.c2[k];
  }

  static void na(Diagnostic& d, const std::string& reason) {
    d.status = AuditStatus::not_applicable;
    d.reason = reason;
  }

  // ----------------------------------------------------------------- hypotheses
  void hypotheses() {
    {
      auto& d = add("H-nostag", "no stagnation: sup u < 0", "non-stagnation hypothesis sup u < 0");
      Extremum e(true);
      for (int k = 0; k < wf_.nodes(); ++k) e.add(k, wf_.u[k]);
      d.value = e.value;
      d.margin = -e.value;
      locate(d, e.at);
      d.status = positive(-e.value);
      nostag_ = d.status == AuditStatus::pass;
    }
    {
      auto& d = add("H-mastergam", "favorable vorticity: gamma, gamma', gamma'' <= 0",
                    "vorticity sign hypothesis gamma <= 0, gamma' <= 0, gamma'' <= 0");
      double mg = -HUGE_VAL, mg1 = -HUGE_VAL, mg2 = -HUGE_VAL;
      int samples = 0;
      if (vf_) {
        const auto r = check_mastergam(*vf_, opts_.mastergam_samples);
        mg = r.max_gamma;
        mg1 = r.max_dgamma;
        mg2 = r.max_d2gamma;
        samples = r.n_samples;
      } else {
        for (int k = 0; k < wf_.nodes(); ++k) {
          mg = std::max(mg, wf_.gam[k]);
          mg1 = std::max(mg1, wf_.dgam[k]);
          mg2 = std::max(mg2, wf_.d2gam[k]);
        }
        samples = wf_.nodes();
      }
      d.value = std::max({mg, mg1, mg2});
      d.margin = -d.value;
      d.extras = {{"max_gamma", mg}, {"max_dgamma", mg1}, {"max_d2gamma", mg2}, {"samples", samples}};
      mastergam_ = d.value <= 0.0;
      d.status = mastergam_ ? AuditStatus::pass : AuditStatus::fail;
      if (!mastergam_) d.reason = "vorticity is not favorable";
    }
    {
      auto& d = add("D-mono", "monotonicity: v > 0 in the open half period and on the surface",
                    "monotonicity hypothesis v > 0 on the open half period");
      Extremum e(false);
      for (int i = 1; i < n1_; ++i)
        for (int j = 1; j <= n2_; ++j) e.add(at(i, j), wf_.v[at(i, j)]);
      d.value = e.value;
      d.margin = e.value;
      locate(d, e.at);
      if (trivial_) {
        na(d, "trivial wave");
      } else {
        d.status = positive(e.value);
      }
      mono_ = d.status == AuditStatus::pass;
    }
    {
      auto& d = add("D-trough", "vortex force criterion g - gamma(0) u > 0 at the trough",
                    "trough criterion g - gamma u > 0");
      const int k = surf(n1_);
      d.value = wf_.g - wf_.gam[k] * wf_.u[k];
      d.margin = d.value;
      locate(d, k);
      d.status = positive(d.value);
      trough_ = d.status == AuditStatus::pass;
    }
    main_ = nostag_ && mastergam_ && trough_ && (mono_ || trivial_);
    if (!nostag_) main_reason_ = "hypothesis H-nostag failed";
    else if (!mastergam_) main_reason_ = "hypothesis H-mastergam failed";
    else if (!trough_) main_reason_ = "hypothesis D-trough failed";
    else if (!(mono_ || trivial_)) main_reason_ = "hypothesis D-mono failed";
  }

  // ------------------------------------------------------------ slope bounds
  void slope_and_sigma() {
    Extremum s(true);
    for (int k = 0; k < wf_.nodes(); ++k) s.add(k, std::abs(wf_.v[k] / wf_.u[k]));
    {
      auto& d = add("D-slope", "streamline slope max |v/u| < 1", "main theorem: slope of any streamline is < 1");
      d.value = s.value;
      d.margin = 1.0 - s.value;
      d.extras = {{"angle_deg", std::atan(s.value) * 180.0 / std::numbers::pi}};
      locate(d, s.at);
      if (main_) d.status = positive(d.margin);
      else na(d, main_reason_);
    }
    {
      auto& d = add("D-sigma", "refined slope bound max |v/u| < sigma", "corollary: |v/u| < sigma");
      double sig2 = -HUGE_VAL, denom_min = HUGE_VAL;
      for (int k = 0; k < wf_.nodes(); ++k) {
        const double gu = wf_.gam[k] * wf_.u[k];
        denom_min = std::min(denom_min, wf_.g + gu);
        if (wf_.g + gu > 0.0) sig2 = std::max(sig2, (wf_.g - gu) / (wf_.g + gu));
      }
      d.value = s.value;
      locate(d, s.at);
      if (!main_) {
        na(d, main_reason_);
      } else if (!(denom_min > 0.0)) {
        na(d, "g + gamma u <= 0 somewhere");
      } else {
        const double sigma = std::sqrt(sig2);
        d.margin = sigma - s.value;
        d.extras = {{"sigma", sigma}, {"sigma2", sig2}};
        d.status = positive(d.margin);
      }
    }
  }

  void ux_sign() {
    auto& d = add("D-ux", "u_x < 0 in the open half period and on the surface", "bounds lemma (a): u_x < 0");
    Extremum e(true);
    for (int i = 1; i < n1_; ++i)
      for (int j = 1; j <= n2_; ++j) e.add(at(i, j), wf_.ux[at(i, j)]);
    d.value = e.value;
    d.margin = -e.value;
    locate(d, e.at);
    if (!main_) na(d, main_reason_);
    else if (trivial_) na(d, "trivial wave");
    else d.status = positive(-e.value);
  }

  void f_function() {
    auto& d = add("D-f", "f = (u^2 - v^2)/2 > 0 and u f_x + v f_y = (u^2+v^2) u_x - gamma u v",
                  "identity u f_x + v f_y = (u^2+v^2) u_x - gamma u v");
    const int n = wf_.nodes();
    std::vector<double> f(n);
    for (int k = 0; k < n; ++k) f[k] = 0.5 * (wf_.u[k] * wf_.u[k] - wf_.v[k] * wf_.v[k]);
    const auto fx = wf_.dx(f, Parity::even);
    const auto fy = wf_.dy(f, Parity::even);
    Extremum fmin(false), rhs(true);
    Residual r;
    for (int k = 0; k < n; ++k) {
      fmin.add(k, f[k]);
      const double lhs = wf_.u[k] * fx[k] + wf_.v[k] * fy[k];
      const double a = V2_[k] * wf_.ux[k], b = wf_.gam[k] * wf_.u[k] * wf_.v[k];
      r.add(k, lhs - a + b, {wf_.u[k] * fx[k], wf_.v[k] * fy[k], a, b});
    }
    for (int i = 1; i < n1_; ++i)
      for (int j = 1; j <= n2_; ++j) {
        const int k = at(i, j);
        rhs.add(k, V2_[k] * wf_.ux[k] - wf_.gam[k] * wf_.u[k] * wf_.v[k]);
      }
    d.value = fmin.value;
    d.margin = fmin.value;
    d.tolerance = tol_.residual;
    locate(d, fmin.at);
    d.extras = {{"identity_residual", r.normalized()}, {"rhs_max", rhs.value}};
    if (!main_) na(d, main_reason_);
    else d.status = all_of({positive(fmin.value), within(r.normalized(), tol_.residual)});
  }

  void alpha_identity() {
    auto& d = add("D-alpha", "alpha-identity on the surface with alpha = sigma^2, right side <= 0",
                  "corollary identity u f_x + v f_y = (alpha+1)(v^2+u^2) u_x - {alpha(gamma u+g)+gamma u-g} v");
    double sig2 = -HUGE_VAL, denom_min = HUGE_VAL;
    for (int k = 0; k < wf_.nodes(); ++k) {
      const double gu = wf_.gam[k] * wf_.u[k];
      denom_min = std::min(denom_min, wf_.g + gu);
      if (wf_.g + gu > 0.0) sig2 = std::max(sig2, (wf_.g - gu) / (wf_.g + gu));
    }
    if (!(denom_min > 0.0)) {
      na(d, "g + gamma u <= 0 somewhere");
      return;
    }
    const double alpha = sig2;
    const int n = wf_.nodes();
    std::vector<double> f(n);
    for (int k = 0; k < n; ++k) f[k] = alpha * wf_.u[k] * wf_.u[k] - wf_.v[k] * wf_.v[k];
    const auto fx = wf_.dx(f, Parity::even);
    const auto fy = wf_.dy(f, Parity::even);
    Residual r;
    Extremum rhs(true);
    for (int i = 0; i <= n1_; ++i) {
      const int k = surf(i);
      const double gu = wf_.gam[k] * wf_.u[k];
      const double a = (alpha + 1.0) * V2_[k] * wf_.ux[k];
      const double b = (alpha * (gu + wf_.g) + gu - wf_.g) * wf_.v[k];
      const double lhs = wf_.u[k] * fx[k] + wf_.v[k] * fy[k];
      r.add(k, lhs - a + b, {wf_.u[k] * fx[k], wf_.v[k] * fy[k], a, b});
      if (i > 0 && i < n1_) rhs.add(k, a - b);
    }
    d.value = rhs.value;
    d.margin = -rhs.value;
    d.tolerance = tol_.residual;
    locate(d, rhs.at);
    d.extras = {{"alpha", alpha}, {"identity_residual", r.normalized()}};
    if (!main_) {
      na(d, main_reason_);
      return;
    }
    const AuditStatus sign = rhs.value <= 0.0 ? AuditStatus::pass : AuditStatus::fail;
    d.status = all_of({sign, within(r.normalized(), tol_.residual)});
  }

  // ------------------------------------------------------- elliptic equations
  void w_equation() {
    auto& d = add("D-w-pde", "w = u_x/u satisfies Laplace(w) + 2(u_x/u) w_x + 2(u_y/u) w_y = gamma'' v <= 0",
                  "elliptic equation for w = u_x/u");
    const int n = wf_.nodes();
    std::vector<double> w(n);
    for (int k = 0; k < n; ++k) w[k] = wf_.ux[k] / wf_.u[k];
    const auto wx = wf_.dx(w, Parity::odd);
    const auto wy = wf_.dy(w, Parity::odd);
    const auto wxx = wf_.dx(wx, Parity::even);
    const auto wyy = wf_.dy(wy, Parity::odd);
    Residual r;
    Extremum src(true);
    for (int i = 1; i < n1_; ++i)
      for (int j = 1; j < n2_; ++j) {
        const int k = at(i, j);
        const double a = 2.0 * wf_.ux[k] / wf_.u[k] * wx[k];
        const double b = 2.0 * wf_.uy[k] / wf_.u[k] * wy[k];
        const double c = wf_.d2gam[k] * wf_.v[k];
        r.add(k, wxx[k] + wyy[k] + a + b - c, {wxx[k], wyy[k], a, b, c});
        src.add(k, c);
      }
    d.value = r.normalized();
    d.margin = tol_.residual - d.value;
    d.tolerance = tol_.residual;
    locate(d, r.at);
    d.extras = {{"source_max", src.value}, {"residual_abs", r.res}};
    if (!nostag_) {
      na(d, "hypothesis H-nostag failed");
      return;
    }
    AuditStatus sign = AuditStatus::pass;
    if (mastergam_ && mono_) sign = src.value <= 0.0 ? AuditStatus::pass : AuditStatus::fail;
    d.status = all_of({within(d.value, tol_.residual), sign});
  }

  void w_on_bed() {
    auto& d = add("D-w-bed", "w = u_x/u > 0 on the bed, w = 0 on the lateral lines", "bounds lemma proof: w > 0 on the bed");
    if (!wf_.has_bed) {
      na(d, "no bed");
      return;
    }
    Extremum e(false);
    for (int i = 1; i < n1_; ++i) e.add(at(i, 0), wf_.ux[at(i, 0)] / wf_.u[at(i, 0)]);
    double lateral = 0.0;
    for (int j = 0; j <= n2_; ++j) {
      lateral = std::max(lateral, std::abs(wf_.ux[at(0, j)] / wf_.u[at(0, j)]));
      lateral = std::max(lateral, std::abs(wf_.ux[at(n1_, j)] / wf_.u[at(n1_, j)]));
    }
    d.value = e.value;
    d.margin = e.value;
    locate(d, e.at);
    d.extras = {{"lateral_max_abs", lateral}};
    if (!main_) na(d, main_reason_);
    else if (trivial_) na(d, "trivial wave");
    else d.status = all_of({positive(e.value), lateral == 0.0 ? AuditStatus::pass : AuditStatus::fail});
  }

  void s_equation() {
    auto& d = add("D-s-pde", "slope s = v/u satisfies its elliptic equation", "elliptic equation for the slope s = v/u");
    const int n = wf_.nodes();
    std::vector<double> s(n);
    for (int k = 0; k < n; ++k) s[k] = wf_.v[k] / wf_.u[k];
    const auto sx = wf_.dx(s, Parity::odd);
    const auto sy = wf_.dy(s, Parity::odd);
    const auto sxx = wf_.dx(sx, Parity::even);
    const auto syy = wf_.dy(sy, Parity::odd);
    Residual r;
    for (int i = 1; i < n1_; ++i)
      for (int j = 1; j < n2_; ++j) {
        const int k = at(i, j);
        const double u = wf_.u[k], v = wf_.v[k], gm = wf_.gam[k];
        const double a = 2.0 * v * (gm - u * sx[k]) / V2_[k] * sx[k];
        const double b = -2.0 * u * (gm + v * sy[k]) / V2_[k] * sy[k];
        r.add(k, sxx[k] + syy[k] + a + b, {sxx[k], syy[k], a, b});
      }
    d.value = r.normalized();
    d.margin = tol_.residual - d.value;
    d.tolerance = tol_.residual;
    locate(d, r.at);
    d.extras = {{"residual_abs", r.res}};
    if (!nostag_) na(d, "hypothesis H-nostag failed");
    else d.status = within(d.value, tol_.residual);
  }

  // ---------------------------------------------------------- surface identities
  void surface_identities() {
    Residual r1, r2;
    double umax = 0.0;
    for (int k = 0; k < wf_.nodes(); ++k) umax = std::max(umax, std::abs(wf_.u[k]));
    const double floor1 = 1e-6 * wf_.g * umax, floor2 = floor1 * umax / ell_;
    for (int i = 0; i <= n1_; ++i) {
      const int k = surf(i);
      const double u = wf_.u[k], v = wf_.v[k], ux = wf_.ux[k], uy = wf_.uy[k];
      const double g = wf_.g, gm = wf_.gam[k], gm1 = wf_.dgam[k];
      const double a1 = (v * v - u * u) * ux, b1 = -2.0 * u * v * uy, c1 = -g * v, e1 = -gm * u * v;
      r1.add(k, a1 + b1 + c1 + e1, {a1, b1, c1, e1});
      const double t1 = -2.0 * V2_[k] * (ux * ux + uy * uy);
      const double t2 = g * v * ux, t3 = -g * u * uy;
      const double t4 = (3.0 * u * v * v - u * u * u) * wf_.uxx[k];
      const double t5 = (v * v * v - 3.0 * u * u * v) * wf_.uxy[k];
      const double t6 = -gm * ((3.0 * u * u + v * v) * uy - 2.0 * u * v * ux + g * u);
      const double t7 = 2.0 * gm1 * u * u * v * v, t8 = -gm * gm * u * u;
      r2.add(k, t1 + t2 + t3 + t4 + t5 + t6 + t7 + t8, {t1, t2, t3, t4, t5, t6, t7, t8});
    }
    {
      auto& d = add("D-p1", "first surface identity (v^2-u^2) u_x - 2uv u_y - g v - gamma u v = 0",
                    "surface identity (v^2-u^2)u_x - 2uv u_y - gv - gamma uv = 0");
      d.value = r1.normalized(floor1);
      d.margin = tol_.residual - d.value;
      d.tolerance = tol_.residual;
      locate(d, r1.at);
      d.extras = {{"residual_abs", r1.res}};
      d.status = within(d.value, tol_.residual);
    }
    {
      auto& d = add("D-p2", "second surface identity (tangential derivative of the first)",
                    "surface identity from a second tangential derivative");
      d.value = r2.normalized(floor2);
      d.margin = tol_.residual - d.value;
      d.tolerance = tol_.residual;
      locate(d, r2.at);
      d.extras = {{"residual_abs", r2.res}};
      d.status = within(d.value, tol_.residual);
    }
  }

  void abc() {
    auto& d = add("D-ABC", "quadratic coefficients A > 0 and C > 0 at admitted surface nodes",
                  "bounds lemma quadratic A w^2 + B w + C");
    double umax = 0.0;
    for (int k = 0; k < wf_.nodes(); ++k) umax = std::max(umax, std::abs(wf_.u[k]));
    const double vfloor = tol_.v_floor * umax;
    Extremum amin(false), cmin(false), bq_min(false), bq_max(true);
    int admitted = 0;
    const int k0 = surf(0);
    const bool hyp = wf_.gam[k0] <= 0.0 && wf_.dgam[k0] <= 0.0;
    for (int i = 1; i < n1_; ++i) {
      const int k = surf(i);
      const double u = wf_.u[k], v = wf_.v[k], g = wf_.g, gm = wf_.gam[k], gm1 = wf_.dgam[k];
      if (!(std::abs(v) > vfloor) || !(u < 0.0) || !(v > 0.0)) continue;
      ++admitted;
      const double V2 = V2_[k];
      const double A = -u * V2 / (4.0 * v * v * v);
      const double C = -v * (g * g + g * gm * u - 4.0 * gm1 * u * u * u * u) / (4.0 * u * u * u * V2);
      const double bq = g * (u * u * u * u - 4.0 * u * u * v * v - v * v * v * v) - gm * u * u * u * (u * u + 5.0 * v * v);
      amin.add(k, A);
      cmin.add(k, C);
      bq_min.add(k, bq);
      bq_max.add(k, bq);
    }
    if (admitted == 0) {
      na(d, "no admitted surface nodes");
      return;
    }
    d.value = std::min(amin.value, cmin.value);
    d.margin = d.value;
    locate(d, amin.value < cmin.value ? amin.at : cmin.at);
    d.extras = {{"min_A", amin.value}, {"min_C", cmin.value}, {"admitted", admitted},
                {"bound_quantity_min", bq_min.value}, {"bound_quantity_max", bq_max.value}};
    if (!hyp) na(d, "gamma(0) or gamma'(0) positive");
    else d.status = all_of({positive(amin.value), positive(cmin.value)});
  }

  // ------------------------------------------------------------- pressure
  void pressure_bounds() {
    const std::size_t ia = report_.diagnostics.size();
    add("D-press-a", "g min eta <= P - patm + g y <= g max eta, equality only at crest/trough", "pressure theorem (a)");
    add("D-press-b", "surface strictly concave at the crest, convex at the trough", "pressure theorem (b)");
    add("D-press-c", "max eta - min eta > (max_B P - min_B P)/g", "pressure theorem (c)");
    add("D-press-d", "P > patm at all depths below the trough", "pressure theorem (d)");
    const std::size_t ib = ia + 1, ic = ia + 2, id = ia + 3;
    auto D = [&](std::size_t i) -> Diagnostic& { return report_.diagnostics[i]; };
    if (!wf_.has_bed) {
      for (auto i : {ia, ib, ic, id}) na(D(i), "no bed (deep water)");
      return;
    }
    if (!nostag_) {
      for (auto i : {ia, ib, ic, id}) na(D(i), "hypothesis H-nostag failed");
      return;
    }
    const double g = wf_.g, lo = g * eta_min_, hi = g * eta_max_;
    {
      Diagnostic& d = D(ia);
      double worst = HUGE_VAL, strict = HUGE_VAL;
      int w_at = -1, s_at = -1;
      for (int i = 0; i <= n1_; ++i)
        for (int j = 0; j <= n2_; ++j) {
          const int k = at(i, j);
          const double f = P_[k] + g * wf_.y[k];
          const double m = std::min(f - lo, hi - f);
          if (m < worst) worst = m, w_at = k;
          if (j < n2_ && m < strict) strict = m, s_at = k;
        }
      const double crest_gap = std::abs(P_[surf(0)] + g * wf_.y[surf(0)] - hi);
      const double trough_gap = std::abs(P_[surf(n1_)] + g * wf_.y[surf(n1_)] - lo);
      d.value = worst;
      d.margin = worst + tol_.eq;
      d.tolerance = tol_.eq;
      locate(d, w_at);
      d.extras = {{"interior_margin", strict}, {"crest_gap", crest_gap}, {"trough_gap", trough_gap}};
      if (trivial_) {
        // the discrete laminar flow is hydrostatic only to discretization accuracy
        d.tolerance = std::max(tol_.eq, tol_.residual * g * ell_);
        d.margin = worst + d.tolerance;
      }
      const AuditStatus bound = worst >= -d.tolerance ? AuditStatus::pass : AuditStatus::fail;
      if (trivial_) {
        d.status = bound;
        d.reason = "trivial wave: equality clause not applicable";
      } else {
        locate(d, s_at);
        d.status = all_of({bound, strict >= tol_.eq ? AuditStatus::pass : AuditStatus::fail,
                           within(crest_gap, tol_.eq), within(trough_gap, tol_.eq)});
      }
    }
    {
      Diagnostic& d = D(ib);
      const double ec = wf_.eta_xx[0], et = wf_.eta_xx[n1_];
      d.value = std::max(ec, -et);
      d.margin = -d.value;
      locate(d, ec > -et ? surf(0) : surf(n1_));
      d.extras = {{"eta_xx_crest", ec}, {"eta_xx_trough", et}};
      if (trivial_) na(d, "trivial wave");
      else d.status = positive(-d.value);
    }
    {
      Diagnostic& d = D(ic);
      double pmax = -HUGE_VAL, pmin = HUGE_VAL;
      for (int i = 0; i <= n1_; ++i) {
        pmax = std::max(pmax, P_[at(i, 0)]);
        pmin = std::min(pmin, P_[at(i, 0)]);
      }
      const double lhs = eta_max_ - eta_min_, rhs = (pmax - pmin) / g;
      d.value = lhs;
      d.margin = lhs - rhs;
      d.extras = {{"bed_pressure_range_over_g", rhs}};
      if (trivial_) na(d, "trivial wave");
      else d.status = positive(d.margin);
    }
    {
      Diagnostic& d = D(id);
      Extremum e(false);
      for (int k = 0; k < wf_.nodes(); ++k)
        if (wf_.y[k] < eta_min_) e.add(k, P_[k]);
      d.value = e.value;
      d.margin = e.value;
      locate(d, e.at);
      if (e.at < 0) na(d, "no nodes below the trough");
      else d.status = positive(e.value);
    }
  }

  void pressure_top() {
    const auto dPdn = pressure_normal_derivative(wf_);
    const double dyn_tol = tol_.dynamic * std::max(1.0, std::abs(wf_.Q));
    double surface_abs = 0.0;
    for (int i = 0; i <= n1_; ++i) surface_abs = std::max(surface_abs, std::abs(P_[surf(i)]));
    double omega_max = -HUGE_VAL;
    for (double gm : wf_.gam) omega_max = std::max(omega_max, gm);
    {
      auto& d = add("D-press-e", "if omega u + g >= 0: P > patm below the surface, P = patm on it, dP/dn < 0",
                    "pressure theorem (e)");
      Extremum hyp(false), below(false), dn(true);
      for (int k = 0; k < wf_.nodes(); ++k) hyp.add(k, wf_.gam[k] * wf_.u[k] + wf_.g);
      for (int i = 0; i <= n1_; ++i)
        for (int j = 0; j < n2_; ++j) below.add(at(i, j), P_[at(i, j)]);
      for (int i = 0; i <= n1_; ++i) dn.add(surf(i), dPdn[i]);
      d.value = below.value;
      d.margin = std::min(below.value, -dn.value);
      locate(d, below.at);
      d.tolerance = dyn_tol;
      d.extras = {{"hypothesis_min", hyp.value}, {"surface_abs", surface_abs}, {"dPdn_max", dn.value}};
      if (!nostag_) na(d, "hypothesis H-nostag failed");
      else if (!(hyp.value >= 0.0)) na(d, "hypothesis omega u + g >= 0 failed");
      else d.status = all_of({positive(below.value), within(surface_abs, dyn_tol), positive(-dn.value)});
    }
    {
      auto& d = add("D-press-f", "if max omega (u^2+v^2) - 4 g u >= 0: P + (max omega) psi / 2 > patm below the surface",
                    "pressure theorem (f)");
      Extremum hyp(false), below(false);
      for (int k = 0; k < wf_.nodes(); ++k) hyp.add(k, omega_max * V2_[k] - 4.0 * wf_.g * wf_.u[k]);
      for (int i = 0; i <= n1_; ++i)
        for (int j = 0; j < n2_; ++j) {
          const int k = at(i, j);
          below.add(k, P_[k] + 0.5 * omega_max * wf_.psi[k]);
        }
      d.value = below.value;
      d.margin = below.value;
      d.tolerance = dyn_tol;
      locate(d, below.at);
      d.extras = {{"hypothesis_min", hyp.value}, {"omega_max", omega_max}, {"surface_abs", surface_abs}};
      if (!nostag_) na(d, "hypothesis H-nostag failed");
      else if (!(hyp.value >= 0.0)) na(d, "hypothesis max omega (u^2+v^2) - 4gu >= 0 failed");
      else d.status = all_of({positive(below.value), within(surface_abs, dyn_tol)});
    }
  }

  void speed_extrema() {
    double omega_min = HUGE_VAL, omega_max = -HUGE_VAL;
    for (double gm : wf_.gam) {
      omega_min = std::min(omega_min, gm);
      omega_max = std::max(omega_max, gm);
    }
    auto near_max = [&](int i0, bool maximize, double& global, double& local, int& k_global) {
      Extremum e(maximize);
      for (int k = 0; k < wf_.nodes(); ++k) e.add(k, std::sqrt(V2_[k]));
      global = e.value;
      k_global = e.at;
      Extremum loc(maximize);
      for (int i = std::max(0, i0 - 1); i <= std::min(n1_, i0 + 1); ++i)
        for (int j = n2_ - 1; j <= n2_; ++j) loc.add(at(i, j), std::sqrt(V2_[at(i, j)]));
      local = loc.value;
    };
    const bool stag_free = nostag_;
    const double rel_tol = trivial_ ? std::max(1e-9, tol_.residual) : 1e-9;
    {
      auto& d = add("D-press-g", "if omega >= 0: relative speed maximized at the trough", "pressure theorem (g)");
      double global, local;
      int kg;
      near_max(n1_, true, global, local, kg);
      d.value = global;
      d.margin = local - global;
      d.tolerance = rel_tol * global;
      locate(d, kg);
      d.extras = {{"trough_neighborhood_max", local}};
      if (!stag_free) na(d, "hypothesis H-nostag failed");
      else if (!(omega_min >= 0.0)) na(d, "vorticity is not nonnegative");
      else d.status = local >= global - d.tolerance ? AuditStatus::pass : AuditStatus::fail;
    }
    {
      auto& d = add("D-press-h", "if omega <= 0: relative speed minimized at the crest", "pressure theorem (h)");
      double global, local;
      int kg;
      near_max(0, false, global, local, kg);
      d.value = global;
      d.margin = global - local;
      d.tolerance = rel_tol * global;
      locate(d, kg);
      d.extras = {{"crest_neighborhood_min", local}};
      if (!stag_free) na(d, "hypothesis H-nostag failed");
      else if (!(omega_max <= 0.0)) na(d, "vorticity is not nonpositive");
      else d.status = local <= global + d.tolerance ? AuditStatus::pass : AuditStatus::fail;
    }
  }

  void bernoulli() {
    auto& d = add("D-bern", "Bernoulli total head is constant", "Bernoulli law: total head");
    Extremum hi(true), lo(false);
    for (int k = 0; k < wf_.nodes(); ++k) {
      const double h = P_[k] + 0.5 * V2_[k] + wf_.g * (wf_.y[k] + wf_.d) - wf_.Gam[k];
      hi.add(k, h);
      lo.add(k, h);
    }
    d.value = hi.value - lo.value;
    d.tolerance = tol_.bern;
    d.margin = tol_.bern - d.value;
    locate(d, hi.at);
    d.extras = {{"Q", 0.5 * (hi.value + lo.value)}};
    d.status = within(d.value, tol_.bern);
  }

  void reduce() {
    auto& d = add("D-reduce", "u^2(trough) = u^2(crest) + 2g[eta(0) - eta(L)], u^2(crest) < lambda_c",
                  "crest/trough speed relation");
    const int kc = surf(0), kt = surf(n1_);
    const double uc2 = wf_.u[kc] * wf_.u[kc], ut2 = wf_.u[kt] * wf_.u[kt];
    const double gap = ut2 - uc2 - 2.0 * wf_.g * (wf_.eta[0] - wf_.eta[n1_]);
    const double second = uc2 + 2.0 * wf_.g * wf_.L - ut2;
    d.value = gap;
    d.tolerance = tol_.bern;
    d.margin = tol_.bern - gap;
    locate(d, kt);
    d.extras = {{"u2_crest", uc2}, {"u2_trough", ut2}, {"length_bound_margin", second}};
    AuditStatus crest = AuditStatus::pass;
    if (!std::isnan(lambda_c_)) {
      d.extras.emplace_back("lambda_c", lambda_c_);
      crest = positive(lambda_c_ - uc2);
    } else {
      d.reason = "lambda_c unavailable: crest bound skipped";
    }
    if (!nostag_) na(d, "hypothesis H-nostag failed");
    else d.status = all_of({within(gap, tol_.bern), positive(second + tol_.bern), crest});
  }

  void monotone_u2() {
    auto& d = add("D-monotone-u2", "u^2 strictly increasing along the surface from crest to trough",
                  "main theorem proof: u strictly monotone along the surface");
    std::vector<double> u2(n1_ + 1);
    for (int i = 0; i <= n1_; ++i) u2[i] = wf_.u[surf(i)] * wf_.u[surf(i)];
    const auto du2 = wf_.surface_dx(u2, Parity::even);
    Extremum e(false);
    for (int i = 1; i < n1_; ++i) e.add(surf(i), du2[i]);
    d.value = e.value;
    d.margin = e.value;
    locate(d, e.at);
    if (!main_) na(d, main_reason_);
    else if (trivial_) na(d, "trivial wave");
    else d.status = positive(e.value);
  }

  void angle() {
    auto& d = add("D-angle", "surface angle periodic (winding 0) and theta' >= g cos(theta)/|V| where dP/dn <= 0",
                  "overturning proposition: theta' >= g cos(theta)/sqrt(X'^2+Y'^2)");
    if (!nostag_) {
      na(d, "hypothesis H-nostag failed");
      return;
    }
    const SurfaceCurve c = surface_curve(wf_);
    Extremum e(false);
    int checked = 0;
    const int n = static_cast<int>(c.theta.size()) - 1;
    for (int k = 0; k < n; ++k) {
      if (!(c.dPdn[k] <= 0.0)) continue;
      ++checked;
      e.add(k, c.dtheta_ds[k] - wf_.g * std::cos(c.theta[k]) / c.speed[k]);
    }
    d.value = e.value;
    d.margin = e.value;
    d.extras = {{"winding", c.winding}, {"checked", checked}};
    if (e.at >= 0) {
      const int half = n / 2;
      const int idx = e.at >= half ? e.at - half : half - e.at;
      locate(d, surf(idx));
    }
    const AuditStatus ineq = checked == 0 ? AuditStatus::pass : (e.value >= 0.0 ? AuditStatus::pass : AuditStatus::fail);
    d.status = all_of({c.winding == 0 ? AuditStatus::pass : AuditStatus::fail, ineq});
  }

  void overturn() {
    auto& d = add("D-overturn", "an overturning wave must have a surface pressure sink dP/dn > 0",
                  "overturning waves have a pressure sink");
    double umin = HUGE_VAL, umax = -HUGE_VAL;
    for (int i = 0; i <= n1_; ++i) {
      umin = std::min(umin, wf_.u[surf(i)]);
      umax = std::max(umax, wf_.u[surf(i)]);
    }
    const bool overturns = umin < 0.0 && umax > 0.0;
    double dn_max = -HUGE_VAL;
    int at_k = -1;
    bool degenerate = false;
    for (int i = 0; i <= n1_; ++i)
      if (V2_[surf(i)] == 0.0) degenerate = true;
    if (!degenerate) {
      const auto dPdn = pressure_normal_derivative(wf_);
      for (int i = 0; i <= n1_; ++i)
        if (dPdn[i] > dn_max) dn_max = dPdn[i], at_k = surf(i);
    }
    d.value = dn_max;
    d.margin = dn_max;
    locate(d, at_k);
    d.extras = {{"overturns", overturns ? 1.0 : 0.0}, {"surface_u_min", umin}, {"surface_u_max", umax}};
    if (degenerate) na(d, "zero relative speed on the surface");
    else if (!overturns) na(d, "wave does not overturn");
    else d.status = positive(dn_max);
  }

  void informational() {
    {
      auto& d = add("D-amick", "irrotational waves: maximum surface angle < 31.15 degrees",
                    "irrotational surface angle bound 31.15 degrees");
      Extremum e(true);
      for (int i = 0; i <= n1_; ++i) e.add(surf(i), std::abs(wf_.v[surf(i)] / wf_.u[surf(i)]));
      const double deg = std::atan(e.value) * 180.0 / std::numbers::pi;
      d.value = deg;
      d.margin = 31.15 - deg;
      locate(d, e.at);
      bool irrotational = true;
      for (double gm : wf_.gam) irrotational = irrotational && gm == 0.0;
      if (!irrotational) na(d, "vorticity is not identically zero");
      else d.status = positive(d.margin);
    }
    {
      auto& d = add("D-uxx-trough", "u_xx at the trough (value only)", "corollary: u_xx at the trough");
      const int k = surf(n1_);
      d.value = wf_.uxx[k];
      locate(d, k);
      d.status = AuditStatus::info;
    }
  }
};

}  // namespace

std::vector<double> pressure_normal_derivative(const WaveField& wf) {
  std::vector<double> P(wf.nodes());
  for (int k = 0; k < wf.nodes(); ++k) P[k] = wf.P[k] - wf.patm;
  const auto Px = wf.dx(P, Parity::even);
  const auto Py = wf.dy(P, Parity::even);
  std::vector<double> out(wf.grid.N1() + 1);
  for (int i = 0; i <= wf.grid.N1(); ++i) {
    const int k = wf.surface(i);
    const double speed = std::hypot(wf.u[k], wf.v[k]);
    if (!(speed > 0.0)) throw NumericError("pressure normal derivative: zero relative speed on the surface");
    out[i] = (wf.v[k] * Px[k] - wf.u[k] * Py[k]) / speed;
  }
  return out;
}

SurfaceCurve surface_curve(const WaveField& wf) {
  const int n1 = wf.grid.N1();
  const auto dPdn = pressure_normal_derivative(wf);
  SurfaceCurve c;
  // trough (mirrored) -> crest -> trough, 2*n1 + 1 samples
  for (int t = -n1; t <= n1; ++t) {
    const int i = std::abs(t);
    const int k = wf.surface(i);
    const double sgn = t < 0 ? -1.0 : 1.0;
    c.label.push_back(sgn * wf.c1[k]);
    c.X.push_back(sgn * wf.x[k]);
    c.Y.push_back(wf.y[k]);
    const double u = wf.u[k], v = sgn * wf.v[k];
    c.theta.push_back(std::atan2(v, u));
    c.speed.push_back(std::hypot(u, v));
    c.dPdn.push_back(dPdn[i]);
  }
  const int n = 2 * n1;  // distinct samples; the last repeats the first
  for (int k = 1; k <= n; ++k) {
    double step = c.theta[k] - c.theta[k - 1];
    step -= 2.0 * std::numbers::pi * std::round(step / (2.0 * std::numbers::pi));
    c.theta[k] = c.theta[k - 1] + step;
  }
  c.winding = static_cast<int>(std::lround((c.theta[n] - c.theta[0]) / (2.0 * std::numbers::pi)));
  const double h = wf.grid.h1();
  c.dtheta_ds.assign(n + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    const int km = k == 0 ? n - 1 : k - 1;
    const int kp = k == n ? 1 : k + 1;
    double dth = c.theta[kp] - c.theta[km];
    dth -= 2.0 * std::numbers::pi * std::round(dth / (2.0 * std::numbers::pi));
    // periodic wrap shifts X by one period
    double dX = c.X[kp] - c.X[km];
    if (k == 0 || k == n) dX += c.X[n] - c.X[0];
    const int ii = std::abs(k - n1);
    const double u = wf.u[wf.surface(ii)];
    // d/ds = u d/dX along the surface; both differences share the label step
    c.dtheta_ds[k] = u * (dth / (2.0 * h)) / (dX / (2.0 * h));
  }
  return c;
}

std::string report_json(const AuditReport& report, int indent) {
  using nlohmann::ordered_json;
  auto num = [](double v) -> ordered_json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  ordered_json diags = ordered_json::array();
  for (const auto& d : report.diagnostics) {
    ordered_json j;
    j["id"] = d.id;
    j["status"] = to_string(d.status);
    j["value"] = num(d.value);
    j["location"] = {{"q", num(d.q)}, {"p", num(d.p)}};
    j["margin"] = num(d.margin);
    j["tolerance"] = num(d.tolerance);
    j["paper_ref"] = d.paper_ref;
    j["description"] = d.description;
    if (!d.reason.empty()) j["reason"] = d.reason;
    if (!d.extras.empty()) {
      ordered_json ex;
      for (const auto& [k, v] : d.extras) ex[k] = num(v);
      j["extras"] = ex;
    }
    diags.push_back(std::move(j));
  }
  ordered_json root;
  root["diagnostics"] = diags;
  root["summary"] = {{"pass", report.summary.pass},
                     {"fail", report.summary.fail},
                     {"boundary", report.summary.boundary},
                     {"na", report.summary.na},
                     {"info", report.summary.info}};
  root["trivial"] = report.trivial;
  return root.dump(indent);
}

AuditReport audit_wave(const WaveField& wf, const VorticityFunction* vf, const AuditOptions& opts) {
  return Auditor(wf, vf, opts).run();
}

}  // namespace vorwave
