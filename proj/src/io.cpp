#include "vorwave/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "vorwave/errors.hpp"

namespace vorwave {

using ojson = nlohmann::ordered_json;

namespace {

ojson grid_json(const StripGrid& g) {
  return {{"Nq", g.Nq}, {"Np", g.Np}, {"L", g.L}, {"m", g.m}, {"stretching", g.stretch}};
}

ojson finite_or_null(double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); }

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("cannot write " + path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

std::string point_name(const std::string& stem, int index, const std::string& ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%04d.", index);
  return stem + buf + ext;
}

void write_point_json(const std::string& path, const BranchPoint& bp, int index) {
  ojson j;
  j["index"] = index;
  j["grid"] = grid_json(bp.field.grid);
  j["g"] = bp.field.g;
  j["Q"] = bp.Q;
  j["amplitude"] = bp.amplitude;
  j["arclength"] = bp.field.arclength;
  j["step"] = bp.step;
  j["newton_iterations"] = bp.newton_iterations;
  j["max_u"] = bp.max_u;
  j["trough_value"] = bp.trough_value;
  j["h"] = bp.field.h;
  write_text(path, j.dump(1));
}

HeightField read_point_json(const std::string& path, const RunConfig& cfg) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_all(path));
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(path + ": " + e.what());
  }
  try {
    const auto& gj = j.at("grid");
    StripGrid grid(gj.at("Nq").get<int>(), gj.at("Np").get<int>(), gj.at("L").get<double>(), gj.at("m").get<double>(),
                   gj.at("stretching").get<double>());
    if (std::abs(grid.L - cfg.L) > 1e-12 * cfg.L || std::abs(grid.m - cfg.m) > 1e-12 * cfg.m)
      throw PreconditionError(path + ": L or m differs from the config");
    HeightField hf = make_height_field(grid, cfg.vorticity_function(), cfg.g);
    hf.h = j.at("h").get<std::vector<double>>();
    if (static_cast<int>(hf.h.size()) != grid.nodes()) throw PreconditionError(path + ": wrong number of heights");
    hf.Q = j.at("Q").get<double>();
    hf.arclength = j.value("arclength", 0.0);
    return hf;
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(path + ": " + e.what());
  }
}

void write_branch_json(const std::string& path, const Branch& br) {
  ojson j;
  j["lambda_star"] = br.lambda_star;
  j["lambda_c"] = br.lambda_c;
  j["eps_stag"] = br.eps_stag;
  j["stop_reason"] = br.stop_reason;
  j["size"] = br.points.size();
  ojson pts = ojson::array();
  for (std::size_t i = 0; i < br.points.size(); ++i) {
    const auto& p = br.points[i];
    pts.push_back({{"index", i}, {"file", point_name("point", static_cast<int>(i), "json")}, {"Q", p.Q},
                   {"amplitude", p.amplitude}, {"step", p.step}, {"newton_iterations", p.newton_iterations},
                   {"max_u", p.max_u}, {"trough_value", finite_or_null(p.trough_value)}});
  }
  j["points"] = pts;
  write_text(path, j.dump(2));
}

void write_bifurcation_json(const std::string& path, const Bifurcation& bif, const StripGrid& grid) {
  ojson j;
  j["lambda_star"] = bif.lambda_star;
  j["lambda_c"] = bif.lambda_c;
  j["Q_star"] = bif.laminar.Q;
  j["grid"] = grid_json(grid);
  std::vector<double> p(grid.Np + 1);
  for (int k = 0; k <= grid.Np; ++k) p[k] = grid.p(k);
  j["p"] = p;
  j["mode"] = bif.mode;
  write_text(path, j.dump(2));
}

std::string sha256_hex(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1)
    throw NumericError("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string sha256_file(const std::string& path) { return sha256_hex(read_all(path)); }

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const std::string& dir, const Manifest& m) {
  ojson j;
  j["tool"] = "vorwave";
  j["version"] = VORWAVE_VERSION;
  j["subcommand"] = m.subcommand;
  j["started"] = m.started;
  j["finished"] = m.finished;
  j["exit_status"] = m.exit_status;
  j["config"] = ojson::parse(m.config);
  ojson inputs = ojson::array();
  for (const auto& p : m.inputs) inputs.push_back({{"path", p}, {"sha256", sha256_file(p)}});
  j["inputs"] = inputs;
  j["outputs"] = m.outputs;
  write_text((std::filesystem::path(dir) / "manifest.json").string(), j.dump(2));
}

}  // namespace vorwave
