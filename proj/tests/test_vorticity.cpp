#include <doctest.h>

#include <cmath>
#include <random>

#include "vorwave/errors.hpp"
#include "vorwave/vorticity.hpp"

using namespace vorwave;

TEST_SUITE("vorticity") {
  TEST_CASE("constant gamma evaluates and integrates in closed form") {
    const auto vf = VorticityFunction::constant(-1.0, 1.0);
    CHECK(vf.gamma(0.3) == -1.0);
    CHECK(vf.gamma(0.3, 1) == 0.0);
    CHECK(vf.gamma(0.3, 2) == 0.0);
    CHECK(vf.Gamma(-0.4) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(vf.Gamma(0.0) == 0.0);
    CHECK(VorticityFunction::constant(0.0, 1.0).Gamma(-1.0) == 0.0);
  }

  TEST_CASE("linear gamma") {
    const auto vf = VorticityFunction::polynomial({0.0, -1.0}, 1.0);
    CHECK(vf.gamma(0.5) == doctest::Approx(-0.5));
    CHECK(vf.gamma(0.5, 1) == doctest::Approx(-1.0));
    // Gamma(s) = int_0^s gamma(-p) dp = int_0^s p dp = s^2/2
    CHECK(vf.Gamma(-0.6) == doctest::Approx(0.18).epsilon(1e-14));
  }

  TEST_CASE("out-of-domain arguments are rejected") {
    const auto vf = VorticityFunction::constant(-1.0, 1.0);
    CHECK_THROWS_AS(vf.gamma(-0.1), DomainError);
    CHECK_THROWS_AS(vf.gamma(1.1), DomainError);
    CHECK_THROWS_AS(vf.Gamma(0.1), DomainError);
    CHECK_THROWS_AS(vf.Gamma(-1.1), DomainError);
  }

  TEST_CASE("Gamma' matches gamma(-s) at random points") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> s_dist(-0.99, -0.01);
    std::vector<double> samples;
    for (int k = 0; k < 21; ++k) samples.push_back(-0.5 - 0.3 * std::sin(0.2 * k));
    const VorticityFunction fns[] = {
        VorticityFunction::constant(-0.7, 1.0),
        VorticityFunction::polynomial({-0.2, 0.4, -1.1, 0.3}, 1.0),
        VorticityFunction::tabulated(samples, 1.0),
    };
    for (const auto& vf : fns) {
      CAPTURE(vf.describe());
      for (int n = 0; n < 100; ++n) {
        const double s = s_dist(rng), h = 1e-5;
        const double dG = (vf.Gamma(s + h) - vf.Gamma(s - h)) / (2 * h);
        CHECK(std::abs(dG - vf.gamma(-s)) < 1e-8);
      }
    }
  }

  TEST_CASE("tabulated gamma reproduces its samples and records cubic order") {
    std::vector<double> samples{-1.0, -1.2, -1.5, -1.9, -2.4};
    const auto vf = VorticityFunction::tabulated(samples, 2.0);
    for (std::size_t k = 0; k < samples.size(); ++k) CHECK(vf.gamma(0.5 * k) == doctest::Approx(samples[k]).epsilon(1e-12));
    CHECK(vf.interpolation_order() == 3);
    CHECK_FALSE(vf.has_closed_form_integral());
  }

  TEST_CASE("check_mastergam examples") {
    const auto r1 = check_mastergam(VorticityFunction::constant(-1.0, 1.0), 101);
    CHECK(r1.pass);
    CHECK(r1.max_gamma == -1.0);
    CHECK(r1.max_dgamma == 0.0);
    CHECK(r1.max_d2gamma == 0.0);
    CHECK_FALSE(check_mastergam(VorticityFunction::constant(0.1, 1.0), 101).pass);
    const auto r3 = check_mastergam(VorticityFunction::polynomial({0.0, 0.0, -1.0}, 1.0), 101);
    CHECK(r3.pass);
    CHECK(r3.max_d2gamma == doctest::Approx(-2.0));
  }

  TEST_CASE("check_mastergam on constants passes iff c <= 0") {
    for (double c : {-2.0, -0.5, -1e-12, 0.0, 1e-12, 0.3}) {
      CAPTURE(c);
      CHECK(check_mastergam(VorticityFunction::constant(c, 1.0), 11).pass == (c <= 0.0));
    }
  }

  TEST_CASE("check_masteru0 examples") {
    auto sample = [](auto f) {
      std::vector<double> y, u;
      for (int k = 0; k <= 40; ++k) {
        y.push_back(-1.0 + k / 40.0);
        u.push_back(f(y.back()));
      }
      return std::make_pair(y, u);
    };
    auto [y1, u1] = sample([](double) { return -1.0; });
    CHECK(check_masteru0(y1, u1).pass);
    auto [y2, u2] = sample([](double y) { return -2.0 + y; });
    CHECK(check_masteru0(y2, u2).pass);
    auto [y3, u3] = sample([](double y) { return -2.0 - y * y; });
    const auto r3 = check_masteru0(y3, u3);
    CHECK_FALSE(r3.pass);
    CHECK(r3.max_third > 0.0);
    auto [y4, u4] = sample([](double y) { return 0.5 + y; });
    CHECK_THROWS_AS(check_masteru0(y4, u4), PreconditionError);
  }
}
