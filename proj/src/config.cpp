#include "vorwave/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "vorwave/errors.hpp"

namespace vorwave {

using nlohmann::json;

namespace {

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

double number(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + "." + key + ": must be finite");
  return x;
}

// null selects the derived default
double number_or_nan(const json& obj, const char* key, double fallback, const std::string& where) {
  if (obj.contains(key) && obj.at(key).is_null()) return std::numeric_limits<double>::quiet_NaN();
  return number(obj, key, fallback, where);
}

int integer(const json& obj, const char* key, int fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

std::vector<double> numbers(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  const json& v = obj.at(key);
  if (!v.is_array() || v.empty()) throw ConfigError(where + "." + key + ": expected a non-empty array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(where + "." + key + ": expected numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

void positive(double x, const char* name) {
  if (!(x > 0.0)) throw ConfigError(std::string(name) + " must be positive");
}

void optional_positive(double x, const char* name) {
  if (!std::isnan(x) && !(x > 0.0)) throw ConfigError(std::string(name) + " must be positive");
}

VorticitySpec parse_vorticity(const json& j) {
  const std::string where = "vorticity";
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw ConfigError(where + ": expected an object with a string 'kind'");
  VorticitySpec s;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") {
    only_keys(j, where, {"kind", "gamma"});
    s.kind = VorticityKind::constant;
    s.gamma = number(j, "gamma", 0.0, where);
  } else if (kind == "poly" || kind == "polynomial") {
    only_keys(j, where, {"kind", "coeffs"});
    s.kind = VorticityKind::polynomial;
    s.coefficients = numbers(j, "coeffs", where);
  } else if (kind == "tabulated") {
    only_keys(j, where, {"kind", "samples"});
    s.kind = VorticityKind::tabulated;
    s.samples = numbers(j, "samples", where);
  } else {
    throw ConfigError(where + ": unknown kind '" + kind + "'");
  }
  return s;
}

json tolerance_value(double x) { return std::isnan(x) ? json(nullptr) : json(x); }

}  // namespace

VorticityFunction RunConfig::vorticity_function() const {
  switch (vorticity.kind) {
    case VorticityKind::constant: return VorticityFunction::constant(vorticity.gamma, m);
    case VorticityKind::polynomial: return VorticityFunction::polynomial(vorticity.coefficients, m);
    case VorticityKind::tabulated: return VorticityFunction::tabulated(vorticity.samples, m);
  }
  throw ConfigError("vorticity: unknown kind");
}

StripGrid RunConfig::grid() const { return StripGrid(Nq, Np, L, m, stretching); }

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  only_keys(root, "config", {"g", "L", "m", "vorticity", "grid", "continuation", "tolerances", "gerstner", "out"});

  RunConfig c;
  c.g = number(root, "g", c.g, "config");
  c.L = number(root, "L", c.L, "config");
  c.m = number(root, "m", c.m, "config");
  positive(c.g, "g");
  positive(c.L, "L");
  positive(c.m, "m");
  if (root.contains("vorticity")) c.vorticity = parse_vorticity(root.at("vorticity"));

  if (root.contains("grid")) {
    const json& j = root.at("grid");
    only_keys(j, "grid", {"Nq", "Np", "stretching"});
    c.Nq = integer(j, "Nq", c.Nq, "grid");
    c.Np = integer(j, "Np", c.Np, "grid");
    c.stretching = number(j, "stretching", c.stretching, "grid");
  }
  if (c.Nq < 4) throw ConfigError("grid.Nq must be at least 4");
  if (c.Np < 5) throw ConfigError("grid.Np must be at least 5");
  if (!(c.stretching >= 0.0 && c.stretching < 1.0)) throw ConfigError("grid.stretching must lie in [0, 1)");

  if (root.contains("continuation")) {
    const json& j = root.at("continuation");
    const std::string w = "continuation";
    only_keys(j, w, {"steps", "ds0", "ds_max", "eps_stag", "trough_margin"});
    auto& o = c.continuation;
    o.steps = integer(j, "steps", o.steps, w);
    o.ds0 = number(j, "ds0", o.ds0, w);
    o.ds_max = number(j, "ds_max", o.ds_max, w);
    o.eps_stag = number_or_nan(j, "eps_stag", o.eps_stag, w);
    o.trough_margin = number(j, "trough_margin", o.trough_margin, w);
  }
  if (c.continuation.steps < 0) throw ConfigError("continuation.steps must be non-negative");
  positive(c.continuation.ds0, "continuation.ds0");
  if (!(c.continuation.ds_max >= c.continuation.ds0)) throw ConfigError("continuation.ds_max must be >= ds0");
  optional_positive(c.continuation.eps_stag, "continuation.eps_stag");

  if (root.contains("tolerances")) {
    const json& j = root.at("tolerances");
    const std::string w = "tolerances";
    only_keys(j, w, {"bern", "eq", "residual", "residual_constant", "v_floor", "dynamic", "trivial_amplitude"});
    auto& t = c.tolerances;
    t.bern = number_or_nan(j, "bern", t.bern, w);
    t.eq = number_or_nan(j, "eq", t.eq, w);
    t.residual = number_or_nan(j, "residual", t.residual, w);
    t.residual_constant = number(j, "residual_constant", t.residual_constant, w);
    t.v_floor = number(j, "v_floor", t.v_floor, w);
    t.dynamic = number(j, "dynamic", t.dynamic, w);
    t.trivial_amplitude = number(j, "trivial_amplitude", t.trivial_amplitude, w);
    optional_positive(t.bern, "tolerances.bern");
    optional_positive(t.eq, "tolerances.eq");
    optional_positive(t.residual, "tolerances.residual");
    positive(t.residual_constant, "tolerances.residual_constant");
    positive(t.v_floor, "tolerances.v_floor");
    positive(t.dynamic, "tolerances.dynamic");
    positive(t.trivial_amplitude, "tolerances.trivial_amplitude");
  }

  if (root.contains("gerstner")) {
    const json& j = root.at("gerstner");
    only_keys(j, "gerstner", {"k", "eps", "n_a", "n_b"});
    c.gerstner.k = number(j, "k", c.gerstner.k, "gerstner");
    c.gerstner.eps = number(j, "eps", c.gerstner.eps, "gerstner");
    c.gerstner.n_a = integer(j, "n_a", c.gerstner.n_a, "gerstner");
    c.gerstner.n_b = integer(j, "n_b", c.gerstner.n_b, "gerstner");
  }
  positive(c.gerstner.k, "gerstner.k");
  if (!(c.gerstner.eps > 0.0 && c.gerstner.eps < 1.0)) throw ConfigError("gerstner.eps must lie in (0, 1)");
  if (c.gerstner.n_a < 2 || c.gerstner.n_b < 5) throw ConfigError("gerstner grid too small");

  if (root.contains("out")) {
    if (!root.at("out").is_string()) throw ConfigError("out: expected a string");
    c.out = root.at("out").get<std::string>();
  }

  // surfaces inconsistent vorticity data (wrong sample counts, ...) as config errors
  try {
    (void)c.vorticity_function();
  } catch (const Error& e) {
    throw ConfigError(std::string("vorticity: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_json(const RunConfig& c, int indent) {
  nlohmann::ordered_json j;
  j["g"] = c.g;
  j["L"] = c.L;
  j["m"] = c.m;
  nlohmann::ordered_json v;
  switch (c.vorticity.kind) {
    case VorticityKind::constant: v["kind"] = "constant"; v["gamma"] = c.vorticity.gamma; break;
    case VorticityKind::polynomial: v["kind"] = "poly"; v["coeffs"] = c.vorticity.coefficients; break;
    case VorticityKind::tabulated: v["kind"] = "tabulated"; v["samples"] = c.vorticity.samples; break;
  }
  j["vorticity"] = v;
  j["grid"] = {{"Nq", c.Nq}, {"Np", c.Np}, {"stretching", c.stretching}};
  const auto& o = c.continuation;
  j["continuation"] = {{"steps", o.steps}, {"ds0", o.ds0}, {"ds_max", o.ds_max},
                       {"eps_stag", tolerance_value(o.eps_stag)}, {"trough_margin", o.trough_margin}};
  const auto& t = c.tolerances;
  j["tolerances"] = {{"bern", tolerance_value(t.bern)}, {"eq", tolerance_value(t.eq)},
                     {"residual", tolerance_value(t.residual)}, {"residual_constant", t.residual_constant},
                     {"v_floor", t.v_floor}, {"dynamic", t.dynamic}, {"trivial_amplitude", t.trivial_amplitude}};
  j["gerstner"] = {{"k", c.gerstner.k}, {"eps", c.gerstner.eps}, {"n_a", c.gerstner.n_a}, {"n_b", c.gerstner.n_b}};
  j["out"] = c.out;
  return j.dump(indent);
}

}  // namespace vorwave
