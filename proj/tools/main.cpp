// vorwave command-line front end.
//
// Exit status: 0 success (all requested audits pass), 1 audit failure,
// 2 configuration or input error, 3 solver error.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vorwave/audit.hpp"
#include "vorwave/config.hpp"
#include "vorwave/errors.hpp"
#include "vorwave/fields.hpp"
#include "vorwave/gerstner.hpp"
#include "vorwave/io.hpp"
#include "vorwave/laminar.hpp"
#include "vorwave/strip_solver.hpp"

namespace fs = std::filesystem;
using namespace vorwave;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0, kAuditFailed = 1, kInputError = 2, kSolverError = 3;

struct Args {
  std::string config;
  std::string out;
  std::string field;
  std::optional<int> point;
  std::optional<double> k, eps;
};

// Thrown for command-line and input problems that are not config parse errors.
struct UsageError : Error {
  using Error::Error;
};

int worker_count() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("VORWAVE_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || cap < 1) throw ConfigError("VORWAVE_THREADS must be a positive integer");
    n = std::min<long>(n, cap);
  }
  return n;
}

// Runs body(i) for i in [0, n) on up to worker_count() threads; rethrows the
// first exception by index so failures are reported deterministically.
template <class F>
void parallel_for(int n, F body) {
  const int workers = std::min(worker_count(), std::max(n, 1));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};
  auto run = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  pool.clear();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

ojson parse_json(const std::string& text) { return ojson::parse(text); }

class Command {
 public:
  Command(std::string name, Args args) : name_(std::move(name)), args_(std::move(args)) {}

  int run() {
    manifest_.subcommand = name_;
    manifest_.started = utc_timestamp();
    load();
    const int status = dispatch();
    manifest_.exit_status = status;
    manifest_.finished = utc_timestamp();
    manifest_.config = config_json(cfg_);
    write_manifest(dir_.string(), manifest_);
    return status;
  }

 private:
  std::string name_;
  Args args_;
  RunConfig cfg_;
  fs::path dir_;
  Manifest manifest_;

  void load() {
    if (!args_.config.empty()) {
      cfg_ = load_config(args_.config);
      manifest_.inputs.push_back(args_.config);
    } else if (name_ != "gerstner") {
      throw ConfigError("--config is required for " + name_);
    }
    if (args_.k) cfg_.gerstner.k = *args_.k;
    if (args_.eps) cfg_.gerstner.eps = *args_.eps;
    if (!(cfg_.gerstner.k > 0.0)) throw ConfigError("--k must be positive");
    if (!(cfg_.gerstner.eps > 0.0 && cfg_.gerstner.eps < 1.0)) throw ConfigError("--eps must lie in (0, 1)");
    if (args_.point && *args_.point < 0) throw UsageError("--point must be non-negative");
    dir_ = args_.out.empty() ? fs::path(cfg_.out) : fs::path(args_.out);
  }

  // --out names a file for audit and gerstner; the manifest goes next to it
  fs::path file_target(const std::string& default_name) {
    if (dir_.has_extension()) {
      const fs::path file = dir_;
      dir_ = file.has_parent_path() ? file.parent_path() : fs::path(".");
      fs::create_directories(dir_);
      return file;
    }
    fs::create_directories(dir_);
    return dir_ / default_name;
  }

  void output(const fs::path& p) { manifest_.outputs.push_back(fs::relative(p, dir_).generic_string()); }

  void require_input(const fs::path& p) {
    if (!fs::exists(p)) throw UsageError("missing input " + p.string());
    manifest_.inputs.push_back(p.string());
  }

  int dispatch() {
    if (name_ == "dispersion") return dispersion();
    if (name_ == "bifurcate") return bifurcate();
    if (name_ == "continue") return continuation();
    if (name_ == "reconstruct") return reconstruct_points();
    if (name_ == "audit") return audit();
    if (name_ == "gerstner") return gerstner();
    if (name_ == "pipeline") return pipeline();
    throw UsageError("unknown subcommand " + name_);
  }

  AuditOptions audit_options() const {
    AuditOptions o;
    o.tol = cfg_.tolerances;
    return o;
  }

  int dispersion() {
    fs::create_directories(dir_);
    const VorticityFunction vf = cfg_.vorticity_function();
    const double g = cfg_.g;
    const double lc = lambda_c(vf, g);
    const LaminarFlow at_c(vf, lc, g);
    ojson j;
    j["lambda_c"] = lc;
    ojson table = ojson::array();
    for (int k = 0; k <= 40; ++k) {
      const double lam = lc * std::pow(2.0, (k - 20) / 10.0);
      if (!(lam > vf.lambda_threshold())) continue;
      table.push_back({{"lambda", lam}, {"Q", q_tilde(vf, lam, g)}});
    }
    j["Qtilde_table"] = table;
    const auto small = gamma_small_criterion(vf, g, cfg_.L);
    const auto smallest = gamma_smallest_criterion(vf, g, cfg_.L, cfg_.m);
    ojson s;
    s["lhs"] = std::isfinite(smallest.lhs) ? ojson(smallest.lhs) : ojson(nullptr);
    s["status"] = to_string(smallest.status);
    if (!smallest.reason.empty()) s["reason"] = smallest.reason;
    if (smallest.agrees_with_gammasmall) s["agrees_with_gammasmall"] = *smallest.agrees_with_gammasmall;
    j["criteria"] = {{"gammasmall", {{"lhs", small.lhs}, {"rhs", small.rhs}, {"status", to_string(small.status)}}},
                     {"gammasmallest", s}};
    j["Q_min"] = q_tilde(vf, lc, g);
    j["depth_at_lambda_c"] = at_c.depth();
    j["lambda_threshold"] = vf.lambda_threshold();
    const fs::path p = dir_ / "dispersion.json";
    write_text(p.string(), j.dump(2));
    output(p);
    std::cout << "lambda_c = " << lc << "\n";
    return kOk;
  }

  int bifurcate() {
    fs::create_directories(dir_);
    const StripGrid grid = cfg_.grid();
    const Bifurcation bif = find_bifurcation(grid, cfg_.vorticity_function(), cfg_.g);
    const fs::path p = dir_ / "bifurcation.json";
    write_bifurcation_json(p.string(), bif, grid);
    output(p);
    std::cout << "lambda_star = " << bif.lambda_star << "  lambda_c = " << bif.lambda_c << "\n";
    return kOk;
  }

  Branch solve_branch() {
    const Branch br = continue_branch(cfg_.grid(), cfg_.vorticity_function(), cfg_.g, cfg_.continuation);
    const fs::path bp = dir_ / "branch.json";
    write_branch_json(bp.string(), br);
    output(bp);
    for (std::size_t i = 0; i < br.points.size(); ++i) {
      const fs::path p = dir_ / point_name("point", static_cast<int>(i), "json");
      write_point_json(p.string(), br.points[i], static_cast<int>(i));
      output(p);
    }
    std::cout << br.points.size() << " points, stop: " << br.stop_reason << "\n";
    return br;
  }

  int continuation() {
    fs::create_directories(dir_);
    solve_branch();
    return kOk;
  }

  std::vector<int> requested_points() {
    if (args_.point) return {*args_.point};
    std::vector<int> idx;
    for (int i = 0; fs::exists(dir_ / point_name("point", i, "json")); ++i) idx.push_back(i);
    if (idx.empty()) throw UsageError("no point files in " + dir_.string());
    return idx;
  }

  int reconstruct_points() {
    if (!args_.field.empty()) {
      require_input(args_.field);
      const fs::path csv = file_target("field.csv");
      write_field_csv(reconstruct(read_point_json(args_.field, cfg_)), csv.string());
      output(csv);
      return kOk;
    }
    if (!fs::is_directory(dir_)) throw UsageError("missing run directory " + dir_.string());
    const std::vector<int> idx = requested_points();
    for (int i : idx) require_input(dir_ / point_name("point", i, "json"));
    parallel_for(static_cast<int>(idx.size()), [&](int n) {
      const HeightField hf = read_point_json((dir_ / point_name("point", idx[n], "json")).string(), cfg_);
      write_field_csv(reconstruct(hf), (dir_ / point_name("field", idx[n], "csv")).string());
    });
    for (int i : idx) output(dir_ / point_name("field", i, "csv"));
    return kOk;
  }

  int audit() {
    const VorticityFunction vf = cfg_.vorticity_function();
    fs::path field, report;
    if (!args_.field.empty()) {
      field = args_.field;
      report = file_target("report.json");
    } else if (args_.point) {
      fs::create_directories(dir_);
      field = dir_ / point_name("field", *args_.point, "csv");
      report = dir_ / point_name("report", *args_.point, "json");
    } else {
      throw UsageError("audit needs a field CSV or --point");
    }
    require_input(field);
    const WaveField wf = read_field_csv(field.string(), {cfg_.g, cfg_.L, cfg_.m, &vf});
    const AuditReport r = audit_wave(wf, wf.has_bed ? &vf : nullptr, audit_options());
    write_text(report.string(), report_json(r));
    output(report);
    print_summary(r);
    return r.ok() ? kOk : kAuditFailed;
  }

  static void print_summary(const AuditReport& r) {
    std::cout << "pass " << r.summary.pass << "  fail " << r.summary.fail << "  boundary " << r.summary.boundary
              << "  not-applicable " << r.summary.na << "  info " << r.summary.info << "\n";
    for (const auto& d : r.diagnostics)
      if (d.status == AuditStatus::fail) std::cout << "  FAIL " << d.id << ": " << d.reason << "\n";
  }

  int gerstner() {
    const fs::path csv = file_target("gerstner_field.csv");
    const auto& gc = cfg_.gerstner;
    const GerstnerWave gw = GerstnerWave::from_steepness(gc.k, gc.eps, cfg_.g);
    const WaveField wf = gerstner_field(gw, gc.n_a, gc.n_b);
    write_field_csv(wf, csv.string(), true);
    output(csv);

    const GerstnerSummary s = summarize_gerstner(gw, wf);
    const GerstnerSlope slope = gerstner_max_slope(gw);
    const AuditReport audit = audit_wave(wf, nullptr, audit_options());
    const bool omega_positive = s.min_omega > 0.0;
    const bool euler_ok = s.max_euler_residual < 1e-6;
    const bool slope_ok = s.sampled_slope_deg <= s.max_slope_deg + 1e-9;

    ojson j;
    j["k"] = gw.k();
    j["eps"] = gw.steepness();
    j["b0"] = gw.b0();
    j["c"] = gw.speed();
    j["max_slope_deg"] = slope.angle_deg;
    j["max_slope_label"] = slope.a;
    j["sampled_slope_deg"] = s.sampled_slope_deg;
    j["min_omega"] = s.min_omega;
    j["omega_positive"] = omega_positive;
    j["max_euler_residual"] = s.max_euler_residual;
    j["euler_ok"] = euler_ok;
    j["overturning"] = s.overturning;
    j["audit"] = parse_json(report_json(audit));
    fs::path rep = csv;
    rep.replace_filename(csv.stem().string() + "_report.json");
    write_text(rep.string(), j.dump(2));
    output(rep);

    std::cout << "max slope " << slope.angle_deg << " deg at a = " << slope.a << " (sampled " << s.sampled_slope_deg
              << ")\nmin omega " << s.min_omega << "\nmax Euler residual " << s.max_euler_residual
              << "\noverturning " << (s.overturning ? "yes" : "no") << "\n";
    return omega_positive && euler_ok && slope_ok ? kOk : kAuditFailed;
  }

  int pipeline() {
    fs::create_directories(dir_);
    const StripGrid grid = cfg_.grid();
    const VorticityFunction vf = cfg_.vorticity_function();
    const Bifurcation bif = find_bifurcation(grid, vf, cfg_.g);
    const fs::path bp = dir_ / "bifurcation.json";
    write_bifurcation_json(bp.string(), bif, grid);
    output(bp);
    const Branch br = solve_branch();

    const int n = static_cast<int>(br.points.size());
    std::vector<AuditReport> reports(n);
    const AuditOptions opts = audit_options();
    parallel_for(n, [&](int i) {
      const WaveField wf = reconstruct(br.points[i].field);
      write_field_csv(wf, (dir_ / point_name("field", i, "csv")).string());
      reports[i] = audit_wave(wf, &vf, opts);
      write_text((dir_ / point_name("report", i, "json")).string(), report_json(reports[i]));
    });

    ojson agg;
    agg["lambda_star"] = br.lambda_star;
    agg["lambda_c"] = br.lambda_c;
    agg["stop_reason"] = br.stop_reason;
    ojson pts = ojson::array();
    int failed = 0;
    for (int i = 0; i < n; ++i) {
      output(dir_ / point_name("field", i, "csv"));
      output(dir_ / point_name("report", i, "json"));
      const auto& r = reports[i];
      failed += r.ok() ? 0 : 1;
      ojson failures = ojson::array();
      for (const auto& d : r.diagnostics)
        if (d.status == AuditStatus::fail) failures.push_back(d.id);
      pts.push_back({{"index", i},
                     {"amplitude", br.points[i].amplitude},
                     {"Q", br.points[i].Q},
                     {"trivial", r.trivial},
                     {"summary", parse_json(report_json(r))["summary"]},
                     {"failures", failures}});
    }
    agg["points"] = pts;
    agg["summary"] = {{"points", n}, {"passed", n - failed}, {"failed", failed}};
    agg["all_pass"] = failed == 0;
    const fs::path rp = dir_ / "report.json";
    write_text(rp.string(), agg.dump(2));
    output(rp);
    std::cout << n - failed << "/" << n << " points pass all audits\n";
    return failed == 0 ? kOk : kAuditFailed;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vorwave: steady periodic water waves with vorticity"};
  app.require_subcommand(1);
  app.set_version_flag("--version", VORWAVE_VERSION);
  Args args;

  struct Spec {
    const char* name;
    const char* help;
  };
  const Spec specs[] = {
      {"dispersion", "laminar head curve, lambda_c and the smallness criteria"},
      {"bifurcate", "bifurcation point lambda* of the laminar family"},
      {"continue", "pseudo-arclength continuation of the wave branch"},
      {"reconstruct", "physical fields of saved branch points"},
      {"audit", "evaluate every diagnostic on a field CSV"},
      {"gerstner", "Gerstner trochoidal wave fixture"},
      {"pipeline", "bifurcate, continue, reconstruct and audit every point"},
  };
  for (const auto& s : specs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--config", args.config, "run configuration (JSON)");
    sub->add_option("--out", args.out, "output directory (a file path for audit and gerstner)");
    const std::string name = s.name;
    if (name == "reconstruct" || name == "audit") sub->add_option("--point", args.point, "branch point index");
    if (name == "audit") sub->add_option("field", args.field, "field CSV to audit");
    if (name == "reconstruct") sub->add_option("point_file", args.field, "single point JSON to reconstruct");
    if (name == "gerstner") {
      sub->add_option("--k", args.k, "wavenumber (1/m)");
      sub->add_option("--eps", args.eps, "steepness exp(k b0) in (0, 1)");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  std::string name;
  for (const CLI::App* sub : app.get_subcommands()) name = sub->get_name();
  try {
    return Command(name, args).run();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kInputError;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const PreconditionError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kSolverError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverError;
  }
}
