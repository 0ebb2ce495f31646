#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "bplat/control.hpp"
#include "bplat/posturography.hpp"
#include "bplat/simulation.hpp"

// JSON configuration for the CLI.  Parsing is strict: unknown keys are
// rejected with the offending field path so typos never pass silently.

namespace bplat {

struct ControlScenario {
  TrackingConfig reference;
  std::array<PidGains, 3> gains{};
  std::array<MotorPlant, 3> plants{};
  bool tune = false;
  int tune_budget = 150;
};

struct PostureScenario {
  enum class Mode { kSynthesize, kAnalyze };
  Mode mode = Mode::kSynthesize;
  SynthesisConfig synthesis;
  FootLayout layout;
  double lower_radius = 0.25;  // [m]
  std::string input_csv;
  std::vector<double> stimuli;
  ThresholdPolicy threshold;
  bool has_cop = false;
  double cop_moment_x = 0.0, cop_force_y = 0.0, cop_force_z = 0.0;
  double cop_height = 0.03;
};

struct AppConfig {
  uint64_t seed = 1;
  PlatformGeometry geometry;
  SystemModel model;          // geometry + inertial parameters
  SimulationConfig simulation;
  ControlScenario control;
  PostureScenario posture;
};

AppConfig parse_config(const nlohmann::json& root);
AppConfig load_config(const std::string& path);

// Standalone block loaders for CLI flags.
FootLayout load_layout_file(const std::string& path);
MotorPlant load_plant_file(const std::string& path);

}  // namespace bplat
