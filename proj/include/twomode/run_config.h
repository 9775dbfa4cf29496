// Run plans for the command-line front end, and their JSON form.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

#include "twomode/equilibrium_lab.h"
#include "twomode/errors.h"
#include "twomode/exact_dynamics.h"
#include "twomode/generalized_dynamics.h"
#include "twomode/induced_dynamics.h"

namespace twomode {

enum class Mode { exact, induced, generalized, sweep, fit, predict };
enum class Format { csv, json };

std::string_view to_string(Mode mode);
std::string_view to_string(Format format);
std::optional<Mode> parse_mode(std::string_view text);
std::optional<Format> parse_format(std::string_view text);

// Invalid configuration. The message names the offending field or file position.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Sampling of the closed-form trajectory (exact mode).
struct Sampling {
  double horizon = 100.0;
  double sample_step = 0.1;

  bool operator==(const Sampling&) const = default;
};

struct ScheduleSettings {
  double tau = 1.0;
  double horizon = 500.0;
  double sample_step = 0.0;  // 0: tau / 50
  CarryOver carry = CarryOver::occupations;

  RuleSchedule schedule() const { return RuleSchedule(tau, horizon, sample_step); }
  bool operator==(const ScheduleSettings&) const = default;
};

struct DetectorConfig {
  double amp_tol = kDefaultAmpTol;
  double window = kDefaultWindow;
  bool stop_early = false;

  DetectorSettings settings() const { return {amp_tol, window, stop_early}; }
  bool operator==(const DetectorConfig&) const = default;
};

// Each optional section is present exactly for the modes that use it:
//   exact        sampling
//   induced      schedule, detector
//   generalized  integrator, detector
//   sweep        sweep, integrator, detector
//   fit          input, or sweep + integrator + detector
//   predict      (params only)
struct RunConfig {
  Mode mode = Mode::exact;
  ModelParams params;
  std::optional<Sampling> sampling;
  std::optional<ScheduleSettings> schedule;
  std::optional<IntegratorConfig> integrator;
  std::optional<SweepSpec> sweep;
  std::optional<DetectorConfig> detector;
  std::optional<std::filesystem::path> input;  // fit mode: CSV with x and y columns
  std::filesystem::path output_path;
  Format format = Format::csv;
  unsigned threads = 0;  // sweep fan-out; 0 = hardware concurrency

  bool operator==(const RunConfig&) const = default;
};

// The default plan for a mode, with every required section filled in.
RunConfig default_config(Mode mode);

// Throws ConfigError on a violated invariant or a misplaced section.
void validate(const RunConfig& config);

nlohmann::json to_json(const RunConfig& config);
// Strict: unknown keys, wrong types and sections foreign to the mode are errors.
// Missing sections and fields take their defaults.
RunConfig config_from_json(const nlohmann::json& doc);
RunConfig config_from_text(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

// Command-line overrides; the uniform flag set.
struct Overrides {
  std::optional<std::filesystem::path> out;
  std::optional<Format> format;
  std::optional<double> omega1, omega2, lambda, alpha1, alpha2;
  std::optional<double> tau, horizon, step;
  std::optional<std::pair<int, int>> seed_state;
  std::optional<std::filesystem::path> input;
};

void apply_overrides(RunConfig& config, const Overrides& overrides);

// "1,0" -> (1, 0)
std::pair<int, int> parse_seed_state(std::string_view text);

}  // namespace twomode
