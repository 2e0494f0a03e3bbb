#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "vorwave/audit.hpp"
#include "vorwave/laminar.hpp"

using namespace vorwave;

namespace {

constexpr double g = 9.81;
constexpr double pi = std::numbers::pi;

WaveField small_wave(double gamma, double amplitude, int nq = 64, int np = 48) {
  const auto vf = VorticityFunction::constant(gamma, 1.0);
  const StripGrid grid(nq, np, pi, 1.0, 0.0);
  const Bifurcation b = find_bifurcation(grid, vf, g);
  return reconstruct(
      newton_solve(seed_from_mode(b, amplitude), {ConstraintKind::fixed_amplitude, amplitude, {}, {}}).field);
}

AuditOptions options_for(const VorticityFunction& vf) {
  AuditOptions o;
  o.lambda_c = lambda_c(vf, g);
  return o;
}

void check_no_failures(const AuditReport& r) {
  for (const auto& d : r.diagnostics) {
    INFO(d.id << ": " << d.reason << " value " << d.value);
    CHECK(d.status != AuditStatus::fail);
  }
}

}  // namespace

TEST_SUITE("audit") {
  TEST_CASE("trivial wave") {
    const auto vf = VorticityFunction::constant(-1.0, 1.0);
    const WaveField wf = reconstruct(discrete_laminar(StripGrid(32, 24, pi, 1.0, 0.0), vf, g, 1.0));
    const AuditReport r = audit_wave(wf, &vf, options_for(vf));
    CHECK(r.trivial);
    CHECK(r.get("D-slope").value == 0.0);
    CHECK(r.get("D-bern").value <= r.get("D-bern").tolerance);
    CHECK(r.get("D-press-a").status == AuditStatus::pass);
    check_no_failures(r);
  }

  TEST_CASE("trivial wave normal pressure derivative is -g") {
    const auto zero = VorticityFunction::constant(0.0, 1.0);
    for (double dn : pressure_normal_derivative(reconstruct(discrete_laminar(StripGrid(16, 12, pi, 1.0, 0.0), zero, g, 2.0))))
      CHECK(dn == doctest::Approx(-g).epsilon(1e-12));
    // with vorticity the discrete laminar flow is hydrostatic to second order
    const auto vf = VorticityFunction::constant(-1.0, 1.0);
    std::vector<double> err;
    for (int np : {96, 192, 384}) {
      double e = 0.0;
      for (double dn : pressure_normal_derivative(reconstruct(discrete_laminar(StripGrid(8, np, pi, 1.0, 0.0), vf, g, 1.0))))
        e = std::max(e, std::abs(dn + g));
      err.push_back(e);
    }
    for (std::size_t k = 1; k < err.size(); ++k) {
      CHECK(err[k - 1] / err[k] > 3.5);
      CHECK(err[k - 1] / err[k] < 4.5);
    }
  }

  TEST_CASE("small irrotational wave matches linear theory") {
    const auto vf = VorticityFunction::constant(0.0, 1.0);
    const WaveField probe = small_wave(0.0, 1e-3);
    const double amplitude = 0.01 * probe.d;
    const WaveField wf = small_wave(0.0, amplitude);
    const AuditReport r = audit_wave(wf, &vf, options_for(vf));
    CHECK_FALSE(r.trivial);
    check_no_failures(r);
    const double k = pi / wf.L;
    const double linear_deg = std::atan(k * amplitude / 2.0) * 180.0 / pi;
    CHECK(r.get("D-amick").value == doctest::Approx(linear_deg).epsilon(0.2));
  }

  TEST_CASE("moderate irrotational wave stays below the Amick angle") {
    const auto vf = VorticityFunction::constant(0.0, 1.0);
    const Branch br = continue_branch(StripGrid(64, 48, pi, 1.0, 0.0), vf, g);
    REQUIRE(br.points.size() > 1);
    const AuditReport r = audit_wave(reconstruct(br.points.back().field), &vf, options_for(vf));
    CHECK(r.get("D-amick").status == AuditStatus::pass);
    CHECK(r.get("D-amick").value < 31.15);
  }

  TEST_CASE("favorable vorticity wave") {
    const auto vf = VorticityFunction::constant(-0.7, 1.0);
    const WaveField wf = small_wave(-0.7, 0.04);
    const AuditReport r = audit_wave(wf, &vf, options_for(vf));
    check_no_failures(r);
    const Diagnostic& abc = r.get("D-ABC");
    CHECK(abc.status == AuditStatus::pass);
    CHECK(abc.extra("min_A") > 0.0);
    CHECK(abc.extra("min_C") > 0.0);
    const Diagnostic& bed = r.get("D-w-bed");
    CHECK(bed.status == AuditStatus::pass);
    CHECK(bed.extra("lateral_max_abs") == 0.0);
    CHECK(r.get("D-angle").extra("winding") == 0.0);
    CHECK(r.get("D-sigma").margin > 0.0);
    CHECK(r.get("D-amick").status == AuditStatus::not_applicable);
    for (double dn : pressure_normal_derivative(wf)) CHECK(dn < 0.0);
  }

  TEST_CASE("inequalities are gated by hypotheses") {
    const auto vf = VorticityFunction::constant(0.5, 1.0);
    const WaveField wf = small_wave(0.5, 0.02, 32, 24);
    const AuditReport r = audit_wave(wf, &vf, options_for(vf));
    CHECK(r.get("D-slope").status == AuditStatus::not_applicable);
    CHECK_FALSE(r.get("D-slope").reason.empty());
    CHECK(r.get("D-press-h").status == AuditStatus::not_applicable);
  }

  TEST_CASE("shifting the atmospheric pressure changes no status") {
    const auto vf = VorticityFunction::constant(-0.3, 1.0);
    const WaveField wf = small_wave(-0.3, 0.03, 48, 36);
    WaveField shifted = wf;
    shifted.patm = 1234.5;
    for (double& p : shifted.P) p += shifted.patm;
    const AuditReport a = audit_wave(wf, &vf, options_for(vf));
    const AuditReport b = audit_wave(shifted, &vf, options_for(vf));
    REQUIRE(a.diagnostics.size() == b.diagnostics.size());
    for (std::size_t k = 0; k < a.diagnostics.size(); ++k) {
      INFO(a.diagnostics[k].id);
      CHECK(a.diagnostics[k].status == b.diagnostics[k].status);
    }
  }

  TEST_CASE("residual diagnostics converge at second order") {
    const auto vf = VorticityFunction::constant(-0.3, 1.0);
    std::vector<AuditReport> rs;
    for (int n : {32, 64, 128}) rs.push_back(audit_wave(small_wave(-0.3, 0.05, n, 3 * n / 4), &vf, options_for(vf)));
    for (const char* id : {"D-w-pde", "D-s-pde"}) {
      for (std::size_t k = 1; k < rs.size(); ++k) {
        INFO(id);
        const double ratio = rs[k - 1].get(id).value / rs[k].get(id).value;
        CHECK(ratio > 3.0);
        CHECK(ratio < 5.0);
      }
    }
  }

  TEST_CASE("report JSON") {
    const auto vf = VorticityFunction::constant(0.0, 1.0);
    const AuditReport r = audit_wave(small_wave(0.0, 0.02, 32, 24), &vf, options_for(vf));
    const auto j = nlohmann::json::parse(report_json(r));
    REQUIRE(j.contains("diagnostics"));
    CHECK(j.at("diagnostics").size() == r.diagnostics.size());
    for (const auto& d : j.at("diagnostics")) {
      CHECK(d.contains("id"));
      CHECK(d.contains("status"));
      CHECK(d.contains("paper_ref"));
    }
    CHECK(j.at("summary").at("fail").get<int>() == r.summary.fail);
    CHECK(report_json(r) == report_json(r));
  }
}
