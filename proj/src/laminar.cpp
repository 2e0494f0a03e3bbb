#include "vorwave/laminar.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include "vorwave/errors.hpp"

namespace vorwave {

namespace {

void require_admissible(const VorticityFunction& vf, double lambda) {
  if (!(lambda > vf.lambda_threshold() + 1e-12)) {
    std::ostringstream os;
    os << "laminar: lambda=" << lambda << " not above the singular threshold " << vf.lambda_threshold();
    throw DomainError(os.str());
  }
}

// int_a^b (lambda + 2 Gamma)^{-n/2}; the integrand may be nearly singular at
// the minimiser of Gamma, which is arranged to be an endpoint
double segment_integral(const VorticityFunction& vf, double lambda, int n, double a, double b) {
  if (!(b > a)) return 0.0;
  auto f = [&](double s) { return std::pow(lambda + 2.0 * vf.Gamma(s), -0.5 * n); };
  const double gap = lambda - vf.lambda_threshold();
  const double scale = std::max(1.0, std::abs(lambda));
  if (gap > 1e-2 * scale) {
    double err = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-12, &err);
  }
  thread_local boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, a, b, 1e-14);
}

// closed forms for constant gamma, written without cancellation
double constant_moment(double gam, double lambda, double m, int n) {
  const double a = lambda, b = lambda - 2.0 * gam * m;  // radicand at s=0 and s=-m
  const double ra = std::sqrt(a), rb = std::sqrt(b);
  switch (n) {
    case 1:
      return 2.0 * m / (ra + rb);
    case 3:
      return 2.0 * m / (ra * rb * (ra + rb));
    case 5:
      return 2.0 * m * (a + ra * rb + b) / (3.0 * std::pow(a * b, 1.5) * (ra + rb));
  }
  throw DomainError("laminar: unsupported moment order");
}

}  // namespace

double laminar_moment(const VorticityFunction& vf, double lambda, int n) {
  require_admissible(vf, lambda);
  const double m = vf.m();
  if (vf.kind() == VorticityKind::constant) return constant_moment(vf.coefficients()[0], lambda, m, n);
  const double split = std::clamp(vf.argmin_Gamma(), -m, 0.0);
  return segment_integral(vf, lambda, n, -m, split) + segment_integral(vf, lambda, n, split, 0.0);
}

double q_tilde(const VorticityFunction& vf, double lambda, double g) {
  return 0.5 * lambda + g * laminar_moment(vf, lambda, 1);
}

double q_tilde_prime(const VorticityFunction& vf, double lambda, double g) {
  return 0.5 * (1.0 - g * laminar_moment(vf, lambda, 3));
}

double q_tilde_second(const VorticityFunction& vf, double lambda, double g) {
  return 0.75 * g * laminar_moment(vf, lambda, 5);
}

double lambda_c(const VorticityFunction& vf, double g) {
  if (!(g > 0.0)) throw DomainError("lambda_c: gravity must be positive");
  const double thr = vf.lambda_threshold();
  const double scale = std::max({std::cbrt(g * vf.m() * g * vf.m()), std::abs(thr), 1e-6});

  double hi = thr + scale;
  int doublings = 0;
  while (q_tilde_prime(vf, hi, g) <= 0.0) {
    if (++doublings > 60) throw NumericError("lambda_c: failed to bracket the minimum of Q~");
    hi = thr + 2.0 * (hi - thr);
  }
  double lo = thr + 0.5 * (hi - thr);
  while (q_tilde_prime(vf, lo, g) >= 0.0) {
    lo = thr + 0.5 * (lo - thr);
    if (lo - thr < 1e-11 * scale) throw NumericError("lambda_c: failed to bracket from below");
  }
  auto fdf = [&](double lam) {
    return std::make_pair(q_tilde_prime(vf, lam, g), q_tilde_second(vf, lam, g));
  };
  std::uintmax_t iters = 200;
  const double guess = 0.5 * (lo + hi);
  const double root = boost::math::tools::newton_raphson_iterate(fdf, guess, lo, hi, 46, iters);
  if (iters >= 200) throw NoConvergenceError("lambda_c: Newton iteration did not converge");
  return root;
}

LaminarFlow::LaminarFlow(VorticityFunction vf, double lambda, double g)
    : vf_(std::move(vf)), lambda_(lambda), g_(g) {
  require_admissible(vf_, lambda_);
  d_ = laminar_moment(vf_, lambda_, 1);
  Q_ = 0.5 * lambda_ + g_ * d_;
}

double LaminarFlow::u0(double s) const { return -std::sqrt(lambda_ + 2.0 * vf_.Gamma(s)); }

double LaminarFlow::height(double s) const { return heights({s}).front(); }

std::vector<double> LaminarFlow::heights(const std::vector<double>& s) const {
  const double m = vf_.m();
  std::vector<double> out(s.size());
  if (vf_.kind() == VorticityKind::constant) {
    const double gam = vf_.coefficients()[0];
    const double rb = std::sqrt(lambda_ - 2.0 * gam * m);
    for (std::size_t k = 0; k < s.size(); ++k) {
      const double sk = std::clamp(s[k], -m, 0.0);
      out[k] = 2.0 * (sk + m) / (std::sqrt(lambda_ + 2.0 * gam * sk) + rb);
    }
    return out;
  }
  const double split = std::clamp(vf_.argmin_Gamma(), -m, 0.0);
  double acc = 0.0, prev = -m;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double sk = std::clamp(s[k], -m, 0.0);
    if (sk < prev) throw DomainError("LaminarFlow::heights: s must be non-decreasing");
    if (prev < split && sk > split) {
      acc += segment_integral(vf_, lambda_, 1, prev, split);
      prev = split;
    }
    acc += segment_integral(vf_, lambda_, 1, prev, sk);
    prev = sk;
    out[k] = acc;
  }
  return out;
}

std::string to_string(CriterionStatus s) {
  switch (s) {
    case CriterionStatus::pass:
      return "pass";
    case CriterionStatus::fail:
      return "fail";
    case CriterionStatus::boundary:
      return "boundary";
  }
  return "fail";
}

CriterionStatus strict_less(double lhs, double rhs, double band) {
  if (std::abs(lhs - rhs) <= band * std::max(1.0, std::abs(rhs))) return CriterionStatus::boundary;
  return lhs < rhs ? CriterionStatus::pass : CriterionStatus::fail;
}

GammaSmallResult gamma_small_criterion(const VorticityFunction& vf, double g, double L) {
  GammaSmallResult r;
  const double g0 = vf.gamma(0.0);
  r.lambda_c = lambda_c(vf, g);
  r.lhs = g0 * g0;
  r.rhs = g * g / (2.0 * g * L + r.lambda_c);
  r.status = strict_less(r.lhs, r.rhs);
  return r;
}

GammaSmallestResult gamma_smallest_criterion(const VorticityFunction& vf, double g, double L, double m) {
  GammaSmallestResult r;
  const double g0 = vf.gamma(0.0);
  const double r1 = 1.0 - 2.0 * L * g0 * g0 / g;
  const double r2 = r1 - 2.0 * g0 * g0 * g0 * m / (g * g);
  if (!(r1 > 0.0) || !(r2 > 0.0)) {
    r.reason = "radicand nonpositive";
    r.status = CriterionStatus::fail;
  } else {
    r.lhs = 1.0 / std::sqrt(r1) - 1.0 / std::sqrt(r2);
    r.status = strict_less(r.lhs, 1.0);
  }
  if (vf.kind() == VorticityKind::constant) {
    const auto small = gamma_small_criterion(vf, g, L);
    r.agrees_with_gammasmall = (small.status == r.status);
  }
  return r;
}

namespace {

double sampled_integral(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  // composite Simpson on an even number of intervals, trapezoid for a leftover
  std::size_t end = (n - 1) % 2 == 0 ? n - 1 : n - 2;
  double acc = 0.0;
  for (std::size_t i = 0; i + 2 <= end; i += 2) acc += h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
  if (end != n - 1) acc += 0.5 * h * (f[n - 2] + f[n - 1]);
  return acc;
}

}  // namespace

FroudeResult froude_criteria(const FroudeInputs& in) {
  const auto& y = in.y;
  const auto& u = in.u_inf_star;
  if (y.size() != u.size() || y.size() < 3) throw PreconditionError("froude: need at least 3 samples");
  for (double v : u)
    if (!(v < 0.0)) throw PreconditionError("froude: profile must be negative");
  const std::size_t n = y.size();
  const double h = (y.back() - y.front()) / static_cast<double>(n - 1);
  if (std::abs(y.front() + in.d) > 1e-9 * in.d || std::abs(y.back()) > 1e-9 * in.d)
    throw PreconditionError("froude: samples must span [-d,0]");

  std::vector<double> inv(n);
  for (std::size_t i = 0; i < n; ++i) inv[i] = 1.0 / (u[i] * u[i]);
  FroudeResult r;
  r.normalization = in.g * sampled_integral(inv, h);
  if (std::abs(r.normalization - 1.0) > 1e-6)
    throw PreconditionError("froude: profile is not normalized (g int dy/u*^2 != 1)");

  const double uy0 = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
  r.surface_product = std::abs(uy0 * u[n - 1]);
  r.F_bound = r.surface_product > 0.0 ? std::sqrt(in.g / r.surface_product)
                                      : std::numeric_limits<double>::infinity();
  r.pass_Fsmall = in.F * in.F < in.g / r.surface_product;
  r.pass_Fallsmall = r.surface_product < in.g / 4.0;
  return r;
}

}  // namespace vorwave
