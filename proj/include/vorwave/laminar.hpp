#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "vorwave/vorticity.hpp"

namespace vorwave {

// Integrals I_n(lambda) = int_{-m}^0 (lambda + 2 Gamma(s))^{-n/2} ds for n = 1, 3, 5.
double laminar_moment(const VorticityFunction& vf, double lambda, int n);

double q_tilde(const VorticityFunction& vf, double lambda, double g);
double q_tilde_prime(const VorticityFunction& vf, double lambda, double g);
double q_tilde_second(const VorticityFunction& vf, double lambda, double g);
double lambda_c(const VorticityFunction& vf, double g);

class LaminarFlow {
 public:
  LaminarFlow(VorticityFunction vf, double lambda, double g);

  const VorticityFunction& vorticity() const { return vf_; }
  double lambda() const { return lambda_; }
  double g() const { return g_; }
  double depth() const { return d_; }
  double head() const { return Q_; }

  // s = -psi in [-m,0]
  double u0(double s) const;
  // height above the bed of the streamline s
  double height(double s) const;
  // heights at increasing s values, accumulated segment by segment
  std::vector<double> heights(const std::vector<double>& s) const;

 private:
  VorticityFunction vf_;
  double lambda_, g_, d_, Q_;
};

enum class CriterionStatus { pass, fail, boundary };
std::string to_string(CriterionStatus s);

// lhs < rhs with a boundary band of 1e-12 (relative to max(1, |rhs|))
CriterionStatus strict_less(double lhs, double rhs, double band = 1e-12);

struct GammaSmallResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double lambda_c = 0.0;
  CriterionStatus status = CriterionStatus::fail;
};

struct GammaSmallestResult {
  double lhs = std::numeric_limits<double>::quiet_NaN();
  CriterionStatus status = CriterionStatus::fail;
  std::string reason;
  // only for constant gamma, where both criteria are equivalent
  std::optional<bool> agrees_with_gammasmall;
};

GammaSmallResult gamma_small_criterion(const VorticityFunction& vf, double g, double L);
GammaSmallestResult gamma_smallest_criterion(const VorticityFunction& vf, double g, double L, double m);

struct FroudeInputs {
  std::vector<double> y;            // uniform samples on [-d,0]
  std::vector<double> u_inf_star;   // normalized upstream profile, negative
  double F = 1.0;
  double d = 1.0;
  double g = 9.81;
};

struct FroudeResult {
  double surface_product = 0.0;  // |(u*)_y u*| at y = 0
  double F_bound = std::numeric_limits<double>::infinity();
  double normalization = 0.0;    // g int dy/(u*)^2
  bool pass_Fsmall = false;
  bool pass_Fallsmall = false;
};

FroudeResult froude_criteria(const FroudeInputs& in);

}  // namespace vorwave
