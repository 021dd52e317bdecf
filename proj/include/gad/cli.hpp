#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "gad/integrate.hpp"
#include "gad/types.hpp"
#include "gad/verify.hpp"

namespace gad::cli {

using json = nlohmann::ordered_json;

/// Config files that cannot be parsed or validated raise this; the driver
/// maps it to exit code 1.
struct ConfigError : GadError {
  using GadError::GadError;
};

/// Everything a run or scan needs, decoded from one JSON config file.
struct RunSetup {
  std::string problem_id;
  json problem_params;
  ProblemSpec problem;
  GadVariant variant;
  RunConfig run;
  Vector x0;
  bool has_x0 = false;
  GridSpec grid;
  bool has_grid = false;
  /// "gad" (default) or "newton"; scans only.
  std::string method = "gad";
  double cluster_tol = 1e-3;
  std::filesystem::path output_dir = ".";
};

/// Builds a problem from its catalogue id and JSON parameter object.
/// Throws ConfigError for unknown ids or bad parameters.
ProblemSpec make_problem(const std::string& id, const json& params);

/// Parses and validates a config file. Throws ConfigError with a
/// position-anchored message on malformed input.
RunSetup parse_config_file(const std::filesystem::path& path);

/// Fixed-format floating-point text: scientific, 16 digits after the
/// point, C locale. Round-trips doubles exactly.
std::string format_double(double value);

json report_to_json(const SaddleReport& report);
SaddleReport report_from_json(const json& j);

void write_trajectory_csv(const std::filesystem::path& path,
                          const ProblemSpec& problem,
                          const TrajectoryRecord& record);
void write_basin_csv(const std::filesystem::path& path, const BasinScan& scan);

/// `run <config>`: integrates, writes trajectory.csv and report.json into
/// output_dir. Returns 0 on convergence, 2 otherwise.
int cmd_run(const std::filesystem::path& config_path);

/// `scan <config>`: grid scan, writes basin.csv into output_dir. Returns 0.
int cmd_scan(const std::filesystem::path& config_path);

/// `verify`: self-check battery (spectrum prediction on random systems,
/// deflation spectra, fixed-point residuals on built-in saddles). Writes
/// verify.json into output_dir. Returns 0 iff every check passes.
int cmd_verify(int n_random, std::uint64_t seed,
               const std::filesystem::path& output_dir);

/// `list`: catalogue of problem ids and variant names.
int cmd_list(std::ostream& out);

/// Full argument parser and dispatcher; config errors yield exit code 1.
int run_main(int argc, char** argv);

}  // namespace gad::cli
