#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "surfdiff/analysis.hpp"
#include "surfdiff/cell_solver.hpp"
#include "surfdiff/field.hpp"
#include "surfdiff/sde.hpp"

namespace surfdiff {

enum class RunMode { surface, cell, bounds, mcmc, ensemble, verify };

const char* mode_name(RunMode mode);

struct ConfigError : std::runtime_error {
  ConfigError(int line_number, const std::string& what_arg);
  int line = 0;  // 1-based line in the config text; 0 when not line-specific
};

// Everything a run needs. Parsed from "key = value" text; CLI flags override
// after parsing.
struct RunConfig {
  RunMode mode = RunMode::cell;
  FieldConfig field;
  std::uint64_t seed = 1;
  std::string out;      // output path; empty means stdout
  std::string msd_out;  // optional MSD table path (mcmc mode)
  int threads = 1;
  int grid_n = 128;  // surface mode raster resolution
  RefineOptions refine;
  SimulationPlan plan;
  std::vector<double> R_list;  // ensemble mode; falls back to {field.R}
  int seeds_per_R = 50;
  int oracle_resolution = 1024;
};

// Strict parser: '#' comments, blank lines, "key = value". Unknown keys,
// duplicate keys, and malformed values all throw ConfigError with the
// offending line number. `mode_override` replaces any mode given in text.
RunConfig parse_config(const std::string& text, std::optional<RunMode> mode_override = {});
RunConfig parse_config_file(const std::string& path, std::optional<RunMode> mode_override = {});

// Consistency checks that span keys (e.g. field family vs. parameters).
// parse_config runs this; exposed for CLI flag overrides.
void validate_config(const RunConfig& config);

}  // namespace surfdiff
