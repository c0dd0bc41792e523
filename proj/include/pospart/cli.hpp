#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pospart/experiments.hpp"
#include "pospart/parabolic.hpp"

namespace pospart {

enum class Command { lemma21, lemma22, lemma23, series, brute, heat, ibp, weakdemo, all };

/// Resolved run configuration. Precedence: command-line flags, then config
/// file values, then the POSPART_OUTPUT_DIR environment variable (output
/// directory only), then defaults.
struct RunConfig {
  Command command = Command::all;
  int n_max = 128;
  int mesh_policy = 64;  // elements per mode
  SeriesExponents exponents;
  double theta = 1.0;
  MassMode mass_mode = MassMode::lumped;
  std::optional<double> tau;  // unset -> per-command default (heat 1e-2, ibp 1e-4)
  double t_final = 1.0;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 24601;
  bool parallel = true;
};

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string usage();

/// Parses flags and an optional flat JSON config file ("--config file").
/// Throws CliError on unknown keys, malformed values, or a missing command.
RunConfig parse_config(const std::vector<std::string>& args);

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
};

/// Executes the selected experiments, writes CSV tables and summary.txt into
/// the output directory, and returns 0 iff every check passed.
/// Propagates exceptions for precondition violations and I/O failures.
int run(const RunConfig& config);

}  // namespace pospart
