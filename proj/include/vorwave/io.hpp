#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vorwave/config.hpp"
#include "vorwave/strip_solver.hpp"

namespace vorwave {

// point_####.json: grid, Q, amplitude and the full height array.
void write_point_json(const std::string& path, const BranchPoint& bp, int index);
// The vorticity and g come from the run config; the grid must match it.
HeightField read_point_json(const std::string& path, const RunConfig& cfg);

void write_branch_json(const std::string& path, const Branch& br);
void write_bifurcation_json(const std::string& path, const Bifurcation& bif, const StripGrid& grid);

std::string point_name(const std::string& stem, int index, const std::string& ext);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

void write_text(const std::string& path, const std::string& text);

struct Manifest {
  std::string subcommand;
  std::string config;  // resolved config JSON
  std::vector<std::string> inputs;   // hashed at write time
  std::vector<std::string> outputs;  // names relative to the manifest directory
  std::string started, finished;     // UTC, ISO 8601
  int exit_status = 0;
};

std::string utc_timestamp();
void write_manifest(const std::string& dir, const Manifest& m);

}  // namespace vorwave
