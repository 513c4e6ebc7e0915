#include "surfdiff/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "surfdiff/io.hpp"

namespace surfdiff {

const char* mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::surface: return "surface";
    case RunMode::cell: return "cell";
    case RunMode::bounds: return "bounds";
    case RunMode::mcmc: return "mcmc";
    case RunMode::ensemble: return "ensemble";
    case RunMode::verify: return "verify";
  }
  return "unknown";
}

ConfigError::ConfigError(int line_number, const std::string& what_arg)
    : std::runtime_error(line_number > 0 ? "line " + std::to_string(line_number) + ": " + what_arg
                                         : what_arg),
      line(line_number) {}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view v, int line, const std::string& key) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError(line, "key '" + key + "' expects a number, got '" + std::string(v) + "'");
  return out;
}

long long parse_int(std::string_view v, int line, const std::string& key) {
  long long out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError(line, "key '" + key + "' expects an integer, got '" + std::string(v) + "'");
  return out;
}

std::uint64_t parse_u64(std::string_view v, int line, const std::string& key) {
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError(line, "key '" + key + "' expects an unsigned integer, got '" + std::string(v) + "'");
  return out;
}

std::vector<double> parse_double_list(std::string_view v, int line, const std::string& key) {
  std::vector<double> out;
  std::string items{v};
  std::replace(items.begin(), items.end(), ',', ' ');
  std::string item;
  std::istringstream stream{items};
  while (stream >> item) out.push_back(parse_double(item, line, key));
  if (out.empty()) throw ConfigError(line, "key '" + key + "' expects a list of numbers");
  return out;
}

RunMode parse_mode(std::string_view v, int line) {
  if (v == "surface") return RunMode::surface;
  if (v == "cell") return RunMode::cell;
  if (v == "bounds") return RunMode::bounds;
  if (v == "mcmc") return RunMode::mcmc;
  if (v == "ensemble") return RunMode::ensemble;
  if (v == "verify") return RunMode::verify;
  throw ConfigError(line, "unknown mode '" + std::string(v) + "'");
}

FieldFamily parse_family(std::string_view v, int line) {
  if (v == "flat") return FieldFamily::flat;
  if (v == "ridge") return FieldFamily::ridge;
  if (v == "poisson") return FieldFamily::poisson;
  if (v == "gaussian") return FieldFamily::gaussian;
  throw ConfigError(line, "unknown field family '" + std::string(v) + "'");
}

}  // namespace

RunConfig parse_config(const std::string& text, std::optional<RunMode> mode_override) {
  RunConfig config;
  std::set<std::string> seen;
  std::istringstream stream(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
    const std::string key{trim(line.substr(0, eq))};
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "empty key");
    if (value.empty()) throw ConfigError(line_no, "key '" + key + "' has no value");
    if (!seen.insert(key).second) throw ConfigError(line_no, "duplicate key '" + key + "'");

    if (key == "mode") config.mode = parse_mode(value, line_no);
    else if (key == "field") config.field.family = parse_family(value, line_no);
    else if (key == "R") config.field.R = parse_double(value, line_no, key);
    else if (key == "alpha") config.field.alpha = parse_double(value, line_no, key);
    else if (key == "lambda") config.field.lambda = parse_double(value, line_no, key);
    else if (key == "modes") config.field.modes = static_cast<int>(parse_int(value, line_no, key));
    else if (key == "decorrelation_threshold")
      config.field.decorrelation_threshold = parse_double(value, line_no, key);
    else if (key == "seed") config.seed = parse_u64(value, line_no, key);
    else if (key == "out") config.out = std::string(value);
    else if (key == "msd_out") config.msd_out = std::string(value);
    else if (key == "threads") config.threads = static_cast<int>(parse_int(value, line_no, key));
    else if (key == "grid_n") config.grid_n = static_cast<int>(parse_int(value, line_no, key));
    else if (key == "tol_rel") config.refine.tol_rel = parse_double(value, line_no, key);
    else if (key == "n0") config.refine.n0 = static_cast<int>(parse_int(value, line_no, key));
    else if (key == "max_n") config.refine.max_n = static_cast<int>(parse_int(value, line_no, key));
    else if (key == "cg_tol") config.refine.cg.tol = parse_double(value, line_no, key);
    else if (key == "cg_max_iterations")
      config.refine.cg.max_iterations = parse_int(value, line_no, key);
    else if (key == "dt") config.plan.dt = parse_double(value, line_no, key);
    else if (key == "T") config.plan.T = parse_double(value, line_no, key);
    else if (key == "delta") config.plan.delta = parse_double(value, line_no, key);
    else if (key == "msd_max_lag") config.plan.msd_max_lag = static_cast<int>(parse_int(value, line_no, key));
    else if (key == "R_list") config.R_list = parse_double_list(value, line_no, key);
    else if (key == "seeds_per_R") config.seeds_per_R = static_cast<int>(parse_int(value, line_no, key));
    else if (key == "oracle_resolution")
      config.oracle_resolution = static_cast<int>(parse_int(value, line_no, key));
    else throw ConfigError(line_no, "unknown key '" + key + "'");
  }

  if (mode_override) config.mode = *mode_override;
  config.plan.seed = config.seed;
  validate_config(config);
  return config;
}

void validate_config(const RunConfig& config) {
  if (config.threads < 1) throw ConfigError(0, "threads must be at least 1");
  if (config.grid_n < 2) throw ConfigError(0, "grid_n must be at least 2");
  if (!(config.refine.tol_rel > 0.0)) throw ConfigError(0, "tol_rel must be positive");
  if (config.refine.max_n < 2) throw ConfigError(0, "max_n must be at least 2");
  if (config.refine.n0 < 0) throw ConfigError(0, "n0 must be nonnegative");
  if (config.refine.n0 > config.refine.max_n) throw ConfigError(0, "n0 must not exceed max_n");
  if (!(config.refine.cg.tol > 0.0)) throw ConfigError(0, "cg_tol must be positive");
  if (config.refine.cg.max_iterations < 0) throw ConfigError(0, "cg_max_iterations must be nonnegative");
  if (config.seeds_per_R < 1) throw ConfigError(0, "seeds_per_R must be at least 1");
  if (config.oracle_resolution < 2) throw ConfigError(0, "oracle_resolution must be at least 2");

  try {
    if (config.mode == RunMode::ensemble && !config.R_list.empty()) {
      // Only the listed cell sizes are instantiated; the base R is never used.
      FieldConfig fc = config.field;
      for (double r : config.R_list) {
        fc.R = r;
        validate_field_config(fc);
      }
    } else {
      validate_field_config(config.field);
    }
    if (config.mode == RunMode::mcmc) validate_plan(config.plan);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, e.what());
  }
}

RunConfig parse_config_file(const std::string& path, std::optional<RunMode> mode_override) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    // An unreadable config is a caller mistake, not a runtime failure.
    throw ConfigError(0, e.what());
  }
  return parse_config(text, mode_override);
}

}  // namespace surfdiff
