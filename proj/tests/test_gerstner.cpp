#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vorwave/errors.hpp"
#include "vorwave/gerstner.hpp"

using namespace vorwave;

namespace {

constexpr double pi = std::numbers::pi;

double closed_slope_deg(double eps) { return std::atan(eps / std::sqrt(1.0 - eps * eps)) * 180.0 / pi; }

}  // namespace

TEST_SUITE("gerstner") {
  TEST_CASE("phase speed") {
    const auto gw = GerstnerWave::from_steepness(1.0, 0.3);
    CHECK(gw.speed() == doctest::Approx(3.1321).epsilon(1e-4));
    CHECK(gw.speed() == doctest::Approx(std::sqrt(9.81)).epsilon(1e-15));
    CHECK(gw.b0() == doctest::Approx(std::log(0.3)).epsilon(1e-15));
  }

  TEST_CASE("closed-form maximum slope") {
    CHECK(gerstner_max_slope(GerstnerWave::from_steepness(1.0, 0.5)).angle_deg == doctest::Approx(30.0).epsilon(1e-12));
    CHECK(gerstner_max_slope(GerstnerWave::from_steepness(1.0, 1.0 / std::sqrt(2.0))).angle_deg ==
          doctest::Approx(45.0).epsilon(1e-12));
    const double a95 = gerstner_max_slope(GerstnerWave::from_steepness(1.0, 0.95)).angle_deg;
    CHECK(a95 == doctest::Approx(71.8).epsilon(1e-3));
    CHECK(std::abs(a95 - closed_slope_deg(0.95)) < 1e-10);
  }

  TEST_CASE("angle increases with steepness toward 90 degrees") {
    double prev = 0.0;
    for (int k = 1; k < 1000; ++k) {
      const double a = gerstner_max_slope(GerstnerWave::from_steepness(2.0, k / 1000.0)).angle_deg;
      CHECK(a > prev);
      prev = a;
    }
    CHECK(gerstner_max_slope(GerstnerWave::from_steepness(1.0, 1.0 - 1e-12)).angle_deg > 89.99);
    const double e45 = 1.0 / std::sqrt(2.0);
    CHECK(gerstner_max_slope(GerstnerWave::from_steepness(1.0, e45 - 1e-6)).angle_deg < 45.0);
    CHECK(gerstner_max_slope(GerstnerWave::from_steepness(1.0, e45 + 1e-6)).angle_deg > 45.0);
  }

  TEST_CASE("sampled slope matches the closed form") {
    for (double eps : {0.2, 0.5, 0.8}) {
      const auto gw = GerstnerWave::from_steepness(1.0, eps);
      const GerstnerSlope s = gerstner_max_slope(gw);
      // a grid node sits exactly on the steepest label
      const int n1 = 4096;
      const WaveField wf = gerstner_field(gw, n1, 16);
      double best = 0.0;
      for (int i = 0; i <= n1; ++i) {
        const int k = wf.surface(i);
        best = std::max(best, std::atan(std::abs(wf.v[k] / wf.u[k])) * 180.0 / pi);
      }
      INFO("eps " << eps << " at a = " << s.a);
      CHECK(best <= s.angle_deg + 1e-9);
      CHECK(std::abs(best - s.angle_deg) < 1e-4);
    }
  }

  TEST_CASE("vorticity is adverse everywhere") {
    for (double eps : {0.05, 0.5, 0.9, 0.99}) {
      const WaveField wf = gerstner_field(GerstnerWave::from_steepness(1.5, eps), 40, 30);
      for (double w : wf.omega) CHECK(w > 0.0);
    }
  }

  TEST_CASE("pressure is constant along label lines") {
    const WaveField wf = gerstner_field(GerstnerWave::from_steepness(1.0, 0.8), 32, 24, 101325.0);
    for (int j = 0; j <= wf.grid.N2(); ++j) {
      const double p0 = wf.P[wf.at(0, j)];
      for (int i = 1; i <= wf.grid.N1(); ++i) CHECK(std::abs(wf.P[wf.at(i, j)] - p0) <= 1e-8 * std::abs(p0));
    }
    for (int i = 0; i <= wf.grid.N1(); ++i) CHECK(wf.P[wf.surface(i)] == doctest::Approx(101325.0).epsilon(1e-15));
  }

  TEST_CASE("Euler residual under the finite-difference oracle") {
    const auto gw = GerstnerWave::from_steepness(1.0, 0.9);
    double worst = 0.0;
    for (int i = 1; i < 20; ++i)
      for (int j = 1; j < 10; ++j) {
        const double a = i * pi / 20.0, b = gw.b0() - j * 0.4;
        worst = std::max(worst, gerstner_euler_residual(gw, a, b));
      }
    CHECK(worst < 1e-6);
    const GerstnerSummary s = summarize_gerstner(gw, gerstner_field(gw, 48, 36));
    CHECK(s.max_euler_residual < 1e-6);
    CHECK(s.min_omega > 0.0);
    CHECK_FALSE(s.overturning);
  }

  TEST_CASE("vanishing steepness flattens the surface") {
    const auto gw = GerstnerWave::from_steepness(1.0, 1e-8);
    const WaveField wf = gerstner_field(gw, 16, 12);
    for (int i = 0; i <= 16; ++i) {
      CHECK(std::abs(wf.y[wf.surface(i)] - gw.b0()) < 1e-7);
      CHECK(wf.u[wf.surface(i)] == doctest::Approx(-gw.speed()).epsilon(1e-7));
    }
  }

  TEST_CASE("invalid parameters") {
    CHECK_THROWS_AS(GerstnerWave::from_steepness(1.0, 1.0), DomainError);
    CHECK_THROWS_AS(GerstnerWave::from_steepness(1.0, 1.5), DomainError);
    CHECK_THROWS_AS(GerstnerWave::from_steepness(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(GerstnerWave::from_steepness(-1.0, 0.5), DomainError);
  }
}
