#include "vorwave/vorticity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>

#include "vorwave/errors.hpp"

namespace vorwave {

struct VorticityFunction::Spline {
  boost::math::interpolators::cardinal_cubic_b_spline<double> curve;
  double step;
  std::vector<double> cumulative;  // int_0^{psi_k} gamma
};

namespace {

constexpr double kDomainSlack = 1e-12;

double horner(const std::vector<double>& c, double x, int order) {
  double acc = 0.0;
  for (std::size_t n = c.size(); n-- > static_cast<std::size_t>(order);) {
    double factor = 1.0;
    for (int r = 0; r < order; ++r) factor *= static_cast<double>(n - r);
    acc = acc * x + factor * c[n];
  }
  return acc;
}

}  // namespace

VorticityFunction::VorticityFunction(VorticityKind kind, std::vector<double> data, double m)
    : kind_(kind), data_(std::move(data)), m_(m) {
  if (!(m_ > 0.0) || !std::isfinite(m_)) throw DomainError("vorticity: flux m must be positive");
  for (double c : data_)
    if (!std::isfinite(c)) throw DomainError("vorticity: non-finite coefficient");
}

VorticityFunction VorticityFunction::constant(double gamma, double m) {
  VorticityFunction vf(VorticityKind::constant, {gamma}, m);
  vf.finish();
  return vf;
}

VorticityFunction VorticityFunction::polynomial(std::vector<double> coeffs, double m) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  VorticityFunction vf(VorticityKind::polynomial, std::move(coeffs), m);
  vf.finish();
  return vf;
}

VorticityFunction VorticityFunction::tabulated(std::vector<double> samples, double m) {
  if (samples.size() < 4) throw DomainError("vorticity: tabulated gamma needs at least 4 samples");
  VorticityFunction vf(VorticityKind::tabulated, std::move(samples), m);
  const double step = m / static_cast<double>(vf.data_.size() - 1);
  auto sp = std::make_shared<Spline>(Spline{
      boost::math::interpolators::cardinal_cubic_b_spline<double>(vf.data_.begin(), vf.data_.end(),
                                                                  0.0, step),
      step,
      {}});
  // the spline is cubic between knots, so 3-point Gauss is exact per interval
  sp->cumulative.assign(vf.data_.size(), 0.0);
  for (std::size_t k = 1; k < vf.data_.size(); ++k) {
    const double a = (k - 1) * step, b = k * step;
    sp->cumulative[k] = sp->cumulative[k - 1] +
                        boost::math::quadrature::gauss<double, 3>::integrate(
                            [&](double x) { return sp->curve(x); }, a, b);
  }
  vf.spline_ = std::move(sp);
  vf.finish();
  return vf;
}

void VorticityFunction::finish() {
  if (kind_ == VorticityKind::constant) {
    min_Gamma_ = std::min(0.0, -data_[0] * m_);
    argmin_Gamma_ = data_[0] > 0.0 ? -m_ : 0.0;
    return;
  }
  // sample, then polish the best sample with Brent
  const int n = 2000;
  double best = 0.0, best_s = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double s = -m_ + m_ * k / n;
    const double G = Gamma(s);
    if (G < best) {
      best = G;
      best_s = s;
    }
  }
  const double h = m_ / n;
  const double lo = std::max(-m_, best_s - h), hi = std::min(0.0, best_s + h);
  if (hi > lo) {
    auto r = boost::math::tools::brent_find_minima([&](double s) { return Gamma(s); }, lo, hi, 52);
    if (r.second < best) {
      best = r.second;
      best_s = r.first;
    }
  }
  min_Gamma_ = best;
  argmin_Gamma_ = best_s;
}

double VorticityFunction::clamp_psi(double psi) const {
  if (!(psi >= -kDomainSlack * m_ && psi <= m_ * (1.0 + kDomainSlack))) {
    std::ostringstream os;
    os << "vorticity: psi=" << psi << " outside [0," << m_ << "]";
    throw DomainError(os.str());
  }
  return std::clamp(psi, 0.0, m_);
}

double VorticityFunction::clamp_s(double s) const {
  if (!(s >= -m_ * (1.0 + kDomainSlack) && s <= kDomainSlack * m_)) {
    std::ostringstream os;
    os << "vorticity: s=" << s << " outside [" << -m_ << ",0]";
    throw DomainError(os.str());
  }
  return std::clamp(s, -m_, 0.0);
}

double VorticityFunction::gamma(double psi, int order) const {
  if (order < 0 || order > 2) throw DomainError("vorticity: derivative order must be 0, 1 or 2");
  psi = clamp_psi(psi);
  switch (kind_) {
    case VorticityKind::constant:
      return order == 0 ? data_[0] : 0.0;
    case VorticityKind::polynomial:
      return horner(data_, psi, order);
    case VorticityKind::tabulated:
      if (order == 0) return spline_->curve(psi);
      if (order == 1) return spline_->curve.prime(psi);
      return spline_->curve.double_prime(psi);
  }
  return 0.0;
}

double VorticityFunction::Gamma(double s) const {
  s = clamp_s(s);
  switch (kind_) {
    case VorticityKind::constant:
      return data_[0] * s;
    case VorticityKind::polynomial: {
      // int_0^s sum c_k (-p)^k dp = sum c_k (-1)^k s^{k+1}/(k+1)
      double acc = 0.0;
      for (std::size_t k = data_.size(); k-- > 0;) acc = acc * s + data_[k] * ((k % 2) ? -1.0 : 1.0) / (k + 1);
      return acc * s;
    }
    case VorticityKind::tabulated: {
      const double psi = -s;  // Gamma(s) = -int_0^{-s} gamma(psi) dpsi
      const auto& sp = *spline_;
      std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(psi / sp.step), data_.size() - 2);
      const double a = k * sp.step;
      double part = 0.0;
      if (psi > a)
        part = boost::math::quadrature::gauss<double, 3>::integrate([&](double x) { return sp.curve(x); },
                                                                   a, psi);
      return -(sp.cumulative[k] + part);
    }
  }
  return 0.0;
}

int VorticityFunction::interpolation_order() const {
  switch (kind_) {
    case VorticityKind::constant:
      return 0;
    case VorticityKind::polynomial:
      return static_cast<int>(data_.size()) - 1;
    case VorticityKind::tabulated:
      return 3;
  }
  return 0;
}

std::string VorticityFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case VorticityKind::constant:
      os << "constant gamma=" << data_[0];
      break;
    case VorticityKind::polynomial:
      os << "polynomial degree " << data_.size() - 1;
      break;
    case VorticityKind::tabulated:
      os << "cubic spline through " << data_.size() << " samples";
      break;
  }
  os << ", m=" << m_;
  return os.str();
}

SignReport check_mastergam(const VorticityFunction& vf, int n_samples) {
  if (n_samples < 2) throw PreconditionError("check_mastergam: need at least 2 samples");
  SignReport r;
  r.n_samples = n_samples;
  r.max_gamma = r.max_dgamma = r.max_d2gamma = -HUGE_VAL;
  for (int k = 0; k < n_samples; ++k) {
    const double psi = vf.m() * k / (n_samples - 1);
    r.max_gamma = std::max(r.max_gamma, vf.gamma(psi, 0));
    r.max_dgamma = std::max(r.max_dgamma, vf.gamma(psi, 1));
    r.max_d2gamma = std::max(r.max_d2gamma, vf.gamma(psi, 2));
  }
  if (r.max_gamma > 0.0)
    r.violation = "gamma > 0";
  else if (r.max_dgamma > 0.0)
    r.violation = "gamma' > 0";
  else if (r.max_d2gamma > 0.0)
    r.violation = "gamma'' > 0";
  r.pass = r.violation.empty();
  return r;
}

namespace {

std::vector<double> first_derivative(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n);
  d[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h);
  d[n - 1] = (3 * f[n - 1] - 4 * f[n - 2] + f[n - 3]) / (2 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2 * h);
  return d;
}

std::vector<double> second_derivative(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n);
  d[0] = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / (h * h);
  d[n - 1] = (2 * f[n - 1] - 5 * f[n - 2] + 4 * f[n - 3] - f[n - 4]) / (h * h);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - 2 * f[i] + f[i - 1]) / (h * h);
  return d;
}

}  // namespace

ProfileSignReport check_masteru0(const std::vector<double>& y, const std::vector<double>& u0) {
  if (y.size() != u0.size() || y.size() < 5)
    throw PreconditionError("check_masteru0: need at least 5 matching samples");
  for (double u : u0)
    if (!(u < 0.0)) throw PreconditionError("check_masteru0: stagnation in profile (u0 >= 0)");
  const double h = (y.back() - y.front()) / static_cast<double>(y.size() - 1);
  if (!(h > 0.0)) throw PreconditionError("check_masteru0: samples must increase in y");
  for (std::size_t i = 1; i < y.size(); ++i)
    if (std::abs((y[i] - y[i - 1]) - h) > 1e-9 * std::abs(h))
      throw PreconditionError("check_masteru0: samples must be uniform in y");

  const auto uy = first_derivative(u0, h);
  const auto uyy = second_derivative(u0, h);
  const auto uyyy = first_derivative(uyy, h);

  ProfileSignReport r;
  r.tolerance = 10.0 * h * h;
  r.min_u0y = HUGE_VAL;
  r.max_u0yy = r.max_third = -HUGE_VAL;
  for (std::size_t i = 0; i < y.size(); ++i) {
    r.min_u0y = std::min(r.min_u0y, uy[i]);
    r.max_u0yy = std::max(r.max_u0yy, uyy[i]);
    r.max_third = std::max(r.max_third, u0[i] * uyyy[i] - uy[i] * uyy[i]);
  }
  if (r.min_u0y < -r.tolerance)
    r.violation = "u0_y < 0";
  else if (r.max_u0yy > r.tolerance)
    r.violation = "u0_yy > 0";
  else if (r.max_third > r.tolerance)
    r.violation = "u0*u0_yyy - u0_y*u0_yy > 0";
  r.pass = r.violation.empty();
  return r;
}

}  // namespace vorwave
