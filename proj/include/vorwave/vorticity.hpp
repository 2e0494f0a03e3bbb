#pragma once

#include <memory>
#include <string>
#include <vector>

namespace vorwave {

enum class VorticityKind { constant, polynomial, tabulated };

// gamma(psi) on [0,m] and its integral Gamma(s) = int_0^s gamma(-p) dp on [-m,0].
// Immutable; copies share the (read-only) spline state.
class VorticityFunction {
 public:
  static VorticityFunction constant(double gamma, double m);
  // coeffs in powers of psi, lowest degree first
  static VorticityFunction polynomial(std::vector<double> coeffs, double m);
  // samples of gamma at psi_k = k*m/(n-1), interpolated by a cubic B-spline
  static VorticityFunction tabulated(std::vector<double> samples, double m);

  VorticityKind kind() const { return kind_; }
  double m() const { return m_; }
  const std::vector<double>& coefficients() const { return data_; }

  // order 0, 1 or 2
  double gamma(double psi, int order = 0) const;
  double Gamma(double s) const;
  double min_Gamma() const { return min_Gamma_; }
  double argmin_Gamma() const { return argmin_Gamma_; }
  // -2 min Gamma: lambda must exceed this for the laminar profile to exist
  double lambda_threshold() const { return -2.0 * min_Gamma_; }

  bool has_closed_form_integral() const { return kind_ != VorticityKind::tabulated; }
  // polynomial degree for closed forms, 3 for the spline
  int interpolation_order() const;
  std::string describe() const;

 private:
  struct Spline;
  VorticityFunction(VorticityKind kind, std::vector<double> data, double m);
  void finish();
  double clamp_psi(double psi) const;
  double clamp_s(double s) const;

  VorticityKind kind_;
  std::vector<double> data_;
  double m_;
  double min_Gamma_ = 0.0;
  double argmin_Gamma_ = 0.0;
  std::shared_ptr<const Spline> spline_;
};

struct SignReport {
  bool pass = false;
  double max_gamma = 0.0;
  double max_dgamma = 0.0;
  double max_d2gamma = 0.0;
  int n_samples = 0;
  std::string violation;  // first failing condition, empty on pass
};

// Samples gamma, gamma', gamma'' on a uniform psi grid; exact sign test.
SignReport check_mastergam(const VorticityFunction& vf, int n_samples);

struct ProfileSignReport {
  bool pass = false;
  double min_u0y = 0.0;
  double max_u0yy = 0.0;
  double max_third = 0.0;  // u0*u0yyy - u0y*u0yy
  double tolerance = 0.0;
  std::string violation;
};

// Uniformly sampled u0(y) on [-d,0], at least five points.
ProfileSignReport check_masteru0(const std::vector<double>& y, const std::vector<double>& u0);

}  // namespace vorwave
