#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include <json.hpp>

#include "vorwave/config.hpp"
#include "vorwave/errors.hpp"
#include "vorwave/io.hpp"

using namespace vorwave;

TEST_SUITE("config_io") {
  TEST_CASE("defaults") {
    const RunConfig c = parse_config("{}");
    CHECK(c.g == 9.81);
    CHECK(c.L == doctest::Approx(std::numbers::pi));
    CHECK(c.m == 1.0);
    CHECK(c.vorticity.kind == VorticityKind::constant);
    CHECK(c.vorticity.gamma == 0.0);
    CHECK(c.continuation.steps == 25);
    CHECK(std::isnan(c.tolerances.residual));
  }

  TEST_CASE("vorticity kinds") {
    const RunConfig p = parse_config(R"({"vorticity": {"kind": "poly", "coeffs": [-0.2, 0.1]}})");
    CHECK(p.vorticity.kind == VorticityKind::polynomial);
    CHECK(p.vorticity_function().gamma(0.5) == doctest::Approx(-0.15));
    const RunConfig t = parse_config(R"({"vorticity": {"kind": "tabulated", "samples": [0, 0.1, 0.2, 0.3, 0.4]}})");
    CHECK(t.vorticity.kind == VorticityKind::tabulated);
    const RunConfig k = parse_config(R"({"vorticity": {"kind": "constant", "gamma": -0.7}, "grid": {"Nq": 32, "Np": 24}})");
    CHECK(k.vorticity_function().gamma(0.3) == -0.7);
    CHECK(k.grid().Nq == 32);
  }

  TEST_CASE("rejections") {
    CHECK_THROWS_AS(parse_config(R"({"bogus": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"grid": {"Nq": 32, "extra": 2}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"vorticity": {"kind": "spline"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"vorticity": {"kind": "poly"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"g": -1})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"grid": {"Np": 2}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"gerstner": {"eps": 1.0}})"), ConfigError);
    CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/cfg.json"), ConfigError);
  }

  TEST_CASE("canonical config JSON round trips") {
    const RunConfig c = parse_config(R"({"vorticity": {"kind": "poly", "coeffs": [-0.3, 0.05]},
                                        "continuation": {"steps": 7, "eps_stag": null}, "out": "x"})");
    const std::string text = config_json(c);
    CHECK(config_json(parse_config(text)) == text);
  }

  TEST_CASE("point files round trip") {
    const RunConfig cfg = parse_config(R"({"vorticity": {"kind": "constant", "gamma": -0.3}, "grid": {"Nq": 8, "Np": 6}})");
    const auto vf = cfg.vorticity_function();
    BranchPoint bp;
    bp.field = discrete_laminar(cfg.grid(), vf, cfg.g, 3.0);
    bp.field.h[bp.field.grid.index(2, 3)] += 1.0 / 3.0;
    bp.Q = bp.field.Q;
    const auto dir = std::filesystem::temp_directory_path() / "vorwave_io_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / point_name("point", 3, "json")).string();
    CHECK(std::filesystem::path(path).filename() == "point_0003.json");
    write_point_json(path, bp, 3);
    const HeightField back = read_point_json(path, cfg);
    CHECK(back.h == bp.field.h);
    CHECK(back.Q == bp.field.Q);
    const RunConfig other = parse_config(R"({"m": 2.0, "grid": {"Nq": 8, "Np": 6}})");
    CHECK_THROWS_AS(read_point_json(path, other), PreconditionError);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("sha256") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  }
}
