#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vorwave/errors.hpp"
#include "vorwave/laminar.hpp"
#include "vorwave/strip_solver.hpp"

using namespace vorwave;

namespace {

constexpr double g = 9.81;

double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

double max_interior(const HeightField& hf, const std::vector<double>& r) {
  double m = 0.0;
  for (int i = 0; i <= hf.grid.Nq; ++i)
    for (int j = 1; j < hf.grid.Np; ++j) m = std::max(m, std::abs(r[hf.grid.index(i, j)]));
  return m;
}

// Continuous laminar profile H(p) sampled on the grid, Q = Q tilde.
HeightField exact_laminar(const StripGrid& grid, const VorticityFunction& vf, double lambda) {
  const LaminarFlow lam(vf, lambda, g);
  HeightField hf = make_height_field(grid, vf, g);
  std::vector<double> s(grid.Np + 1);
  for (int j = 0; j <= grid.Np; ++j) s[j] = grid.p(j);
  const auto H = lam.heights(s);
  for (int i = 0; i <= grid.Nq; ++i)
    for (int j = 0; j <= grid.Np; ++j) hf.at(i, j) = H[j];
  hf.Q = lam.head();
  return hf;
}

// Linearization about the laminar flow for the mode cos(k q):
// phi'' + 3 gamma(-p) H'^2 phi' - k^2 H'^2 phi = 0, phi(-m) = 0, phi'(0) = g H'(0)^3 phi(0).
// Returns the surface mismatch of the RK4 shot with phi'(-m) = 1.
double shoot(const VorticityFunction& vf, double lambda, double k, double m) {
  const int n = 20000;
  const double h = m / n;
  auto Hp = [&](double p) { return 1.0 / std::sqrt(lambda + 2.0 * vf.Gamma(p)); };
  auto rhs = [&](double p, double y0, double y1, double& d0, double& d1) {
    const double a = Hp(p);
    d0 = y1;
    d1 = -3.0 * vf.gamma(-p) * a * a * y1 + k * k * a * a * y0;
  };
  double p = -m, y0 = 0.0, y1 = 1.0;
  for (int s = 0; s < n; ++s) {
    double a0, a1, b0, b1, c0, c1, e0, e1;
    rhs(p, y0, y1, a0, a1);
    rhs(p + h / 2, y0 + h / 2 * a0, y1 + h / 2 * a1, b0, b1);
    rhs(p + h / 2, y0 + h / 2 * b0, y1 + h / 2 * b1, c0, c1);
    rhs(std::min(p + h, 0.0), y0 + h * c0, y1 + h * c1, e0, e1);
    y0 += h / 6 * (a0 + 2 * b0 + 2 * c0 + e0);
    y1 += h / 6 * (a1 + 2 * b1 + 2 * c1 + e1);
    p += h;
  }
  const double a = Hp(0.0);
  return y1 - g * a * a * a * y0;
}

double shooting_lambda_star(const VorticityFunction& vf, double L, double m) {
  const double k = std::numbers::pi / L;
  double lo = vf.lambda_threshold() + 1e-6, hi = lambda_c(vf, g);
  const double s_hi = shoot(vf, hi, k, m);
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    ((shoot(vf, mid, k, m) > 0) == (s_hi > 0) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// irrotational dispersion relation lambda = (g/k) tanh(k d), d = m / sqrt(lambda)
double irrotational_lambda_star(double L, double m) {
  const double k = std::numbers::pi / L;
  auto f = [&](double l) { return l - g / k * std::tanh(k * m / std::sqrt(l)); };
  double lo = 1e-8, hi = std::cbrt(g * g * m * m);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("strip_solver") {
  TEST_CASE("linear profile has an exactly vanishing interior residual") {
    const StripGrid grid(8, 10, 1.0, 1.0, 0.0);
    HeightField hf = make_height_field(grid, VorticityFunction::constant(0.0, 1.0), g);
    for (int i = 0; i <= grid.Nq; ++i)
      for (int j = 0; j <= grid.Np; ++j) hf.at(i, j) = grid.p(j) + 1.0;
    hf.Q = 0.5 + g * 1.0;
    const auto r = residual(hf);
    CHECK(max_abs(r) < 1e-13);
  }

  TEST_CASE("laminar residual converges at second order") {
    const auto vf = VorticityFunction::polynomial({-0.5, -0.4}, 1.0);
    std::vector<double> err;
    for (int np : {16, 32, 64, 128}) {
      const StripGrid grid(4, np, std::numbers::pi, 1.0, 0.0);
      const HeightField hf = exact_laminar(grid, vf, 3.0);
      err.push_back(max_abs(residual(hf)));
    }
    for (std::size_t k = 1; k < err.size(); ++k) {
      const double order = std::log2(err[k - 1] / err[k]);
      CAPTURE(order);
      CHECK(order > 1.8);
      CHECK(order < 2.2);
    }
  }

  TEST_CASE("residual is linear in a small perturbation away from bifurcation") {
    const auto vf = VorticityFunction::constant(-0.3, 1.0);
    const StripGrid grid(16, 12, std::numbers::pi, 1.0, 0.0);
    const HeightField base = discrete_laminar(grid, vf, g, 3.0);
    const auto r0 = residual(base);
    auto perturbed = [&](double eps) {
      HeightField hf = base;
      for (int i = 0; i <= grid.Nq; ++i)
        for (int j = 1; j <= grid.Np; ++j)
          hf.at(i, j) += eps * std::cos(std::numbers::pi * grid.q(i) / grid.L) * (grid.p(j) + 1.0);
      auto r = residual(hf);
      for (std::size_t k = 0; k < r.size(); ++k) r[k] -= r0[k];
      return max_abs(r);
    };
    const double a = perturbed(1e-6), b = perturbed(2e-6);
    CHECK(a > 1e-8);
    CHECK(b / a == doctest::Approx(2.0).epsilon(1e-4));
  }

  TEST_CASE("stagnation is rejected") {
    const StripGrid grid(8, 8, 1.0, 1.0, 0.0);
    HeightField hf = discrete_laminar(grid, VorticityFunction::constant(0.0, 1.0), g, 4.0);
    hf.at(3, 4) = hf.at(3, 5) + 0.1;
    CHECK_THROWS_AS(residual(hf), StagnationError);
    CHECK_THROWS_AS(newton_solve(hf, {ConstraintKind::fixed_Q, hf.Q, {}, {}}), StagnationError);
  }

  TEST_CASE("analytic Jacobian matches finite differences") {
    const auto vf = VorticityFunction::polynomial({-0.3, -0.2, -0.1}, 1.0);
    const StripGrid grid(5, 6, std::numbers::pi, 1.0, 0.2);
    HeightField hf = discrete_laminar(grid, vf, g, 3.0);
    for (int i = 0; i <= grid.Nq; ++i)
      for (int j = 1; j <= grid.Np; ++j) hf.at(i, j) += 0.02 * std::cos(0.7 * i) * grid.zeta(j) * (1 + 0.3 * j);
    for (ConstraintKind kind : {ConstraintKind::fixed_Q, ConstraintKind::fixed_amplitude, ConstraintKind::arclength}) {
      Constraint c{kind, 0.01, {}, {}};
      if (kind == ConstraintKind::arclength) {
        c.base = pack_unknowns(hf);
        c.tangent.assign(c.base.size(), 0.0);
        for (std::size_t k = 0; k < c.tangent.size(); ++k) c.tangent[k] = std::sin(0.3 * k);
      }
      const auto J = dense_jacobian(hf, c);
      const auto x0 = pack_unknowns(hf);
      double worst = 0.0;
      for (std::size_t col = 0; col < x0.size(); ++col) {
        const double h = 1e-7;
        auto xp = x0, xm = x0;
        xp[col] += h;
        xm[col] -= h;
        HeightField fp = hf, fm = hf;
        unpack_unknowns(xp, fp);
        unpack_unknowns(xm, fm);
        const auto Fp = system_residual(fp, c), Fm = system_residual(fm, c);
        for (std::size_t row = 0; row < Fp.size(); ++row)
          worst = std::max(worst, std::abs((Fp[row] - Fm[row]) / (2 * h) - J[row][col]));
      }
      CAPTURE(static_cast<int>(kind));
      CHECK(worst < 1e-5);
    }
  }

  TEST_CASE("bifurcation point against independent oracles") {
    SUBCASE("irrotational dispersion relation") {
      const auto vf = VorticityFunction::constant(0.0, 1.0);
      const double exact = irrotational_lambda_star(std::numbers::pi, 1.0);
      CHECK(shooting_lambda_star(vf, std::numbers::pi, 1.0) == doctest::Approx(exact).epsilon(1e-9));
      double prev_err = 0.0;
      for (int n : {32, 64}) {
        const Bifurcation b = find_bifurcation(StripGrid(n, n * 3 / 4, std::numbers::pi, 1.0, 0.0), vf, g);
        const double err = std::abs(b.lambda_star - exact);
        CHECK(err < 2e-3 * exact);
        if (prev_err > 0.0) CHECK(prev_err / err > 3.0);
        prev_err = err;
        CHECK(b.lambda_star < b.lambda_c);
        CHECK(b.mode.back() == doctest::Approx(1.0));
      }
    }
    SUBCASE("constant and linear vorticity") {
      for (const auto& vf : {VorticityFunction::constant(-0.7, 1.0), VorticityFunction::polynomial({-0.2, -0.6}, 1.0)}) {
        CAPTURE(vf.describe());
        const double ref = shooting_lambda_star(vf, std::numbers::pi, 1.0);
        const Bifurcation b = find_bifurcation(StripGrid(64, 48, std::numbers::pi, 1.0, 0.0), vf, g);
        CHECK(b.lambda_star == doctest::Approx(ref).epsilon(2e-3));
      }
    }
  }

  TEST_CASE("long waves approach lambda_c, short waves stay positive") {
    const auto vf = VorticityFunction::constant(0.0, 1.0);
    double prev = 0.0;
    for (double L : {std::numbers::pi, 2 * std::numbers::pi, 4 * std::numbers::pi}) {
      const Bifurcation b = find_bifurcation(StripGrid(32, 24, L, 1.0, 0.0), vf, g);
      CHECK(b.lambda_star > prev);
      CHECK(b.lambda_star < b.lambda_c);
      prev = b.lambda_star;
    }
    const Bifurcation shortw = find_bifurcation(StripGrid(32, 24, 0.3, 1.0, 0.0), vf, g);
    CHECK(shortw.lambda_star > 0.0);
    CHECK(shortw.lambda_star < prev);
  }

  TEST_CASE("Newton from the laminar root returns it") {
    const auto vf = VorticityFunction::constant(-0.5, 1.0);
    const HeightField lam = discrete_laminar(StripGrid(16, 12, std::numbers::pi, 1.0, 0.0), vf, g, 3.5);
    const NewtonResult r = newton_solve(lam, {ConstraintKind::fixed_Q, lam.Q, {}, {}});
    CHECK(r.iterations <= 1);
    double diff = 0.0;
    for (std::size_t k = 0; k < lam.h.size(); ++k) diff = std::max(diff, std::abs(lam.h[k] - r.field.h[k]));
    CHECK(diff < 1e-10);
  }

  TEST_CASE("Newton at fixed small amplitude finds a monotone wave") {
    const auto vf = VorticityFunction::constant(-0.3, 1.0);
    const StripGrid grid(32, 24, std::numbers::pi, 1.0, 0.0);
    const Bifurcation b = find_bifurcation(grid, vf, g);
    const NewtonResult r = newton_solve(seed_from_mode(b, 1e-3), {ConstraintKind::fixed_amplitude, 1e-3, {}, {}});
    CHECK(r.field.amplitude() == doctest::Approx(1e-3).epsilon(1e-8));
    // v = -h_q/h_p > 0 in the open half strip means h decreasing in q
    int bad = 0;
    for (int i = 1; i < grid.Nq; ++i)
      for (int j = 1; j <= grid.Np; ++j) bad += r.field.at(i + 1, j) < r.field.at(i - 1, j) ? 0 : 1;
    CHECK(bad == 0);
  }

  TEST_CASE("continuation") {
    const auto vf = VorticityFunction::constant(0.0, 1.0);
    const StripGrid grid(32, 24, std::numbers::pi, 1.0, 0.0);
    SUBCASE("zero steps keeps only the trivial wave") {
      ContinuationOptions o;
      o.steps = 0;
      const Branch br = continue_branch(grid, vf, g, o);
      CHECK(br.points.size() == 1);
      CHECK(br.points[0].amplitude == 0.0);
    }
    SUBCASE("branch properties") {
      ContinuationOptions o;
      o.steps = 12;
      const Branch br = continue_branch(grid, vf, g, o);
      REQUIRE(br.points.size() == 13);
      CHECK(br.stop_reason == "max_steps");
      for (std::size_t k = 1; k < br.points.size(); ++k) CHECK(br.points[k].amplitude > br.points[k - 1].amplitude);
      // start tangency with cos(pi q / L)
      const auto& f = br.points[1].field;
      double sab = 0, saa = 0, sbb = 0, mean = 0;
      for (int i = 0; i <= grid.Nq; ++i) mean += f.at(i, grid.Np) / (grid.Nq + 1);
      for (int i = 0; i <= grid.Nq; ++i) {
        const double a = f.at(i, grid.Np) - mean, c = std::cos(std::numbers::pi * grid.q(i) / grid.L);
        sab += a * c;
        saa += a * a;
        sbb += c * c;
      }
      CHECK(sab / std::sqrt(saa * sbb) >= 0.999);
      // bed row stays exactly zero
      for (const auto& p : br.points)
        for (int i = 0; i <= grid.Nq; ++i) CHECK(p.field.at(i, 0) == 0.0);
    }
  }
}
