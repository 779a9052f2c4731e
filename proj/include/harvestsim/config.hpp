#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "harvestsim/electromech.hpp"
#include "harvestsim/geartrain.hpp"
#include "harvestsim/kinematics.hpp"
#include "harvestsim/simulate.hpp"

namespace harvestsim {

// Toolkit configuration: one JSON file with nested sections. Every physical
// quantity carries a unit-suffixed key (module_mm, r_internal_ohm, ...).
// Unknown keys are rejected. See the README for the full schema.

struct KinematicsInputConfig {
  std::string label;
  std::string file;
  double speed_kmh = 0.0;
  Gait gait = Gait::Walking;
  std::string joint;  // name of a JointDefinition in KinematicsConfig::joints
};

struct KinematicsConfig {
  double visibility_threshold = kDefaultVisibilityThreshold;
  int smoothing_window = kDefaultSmoothingWindow;
  std::vector<JointDefinition> joints;
  std::vector<KinematicsInputConfig> inputs;
};

struct GearTrainConfig {
  GearTrain train;
  /// One entry per mesh (stage i carries the expected distance of the mesh
  /// driving it from stage i-1).
  std::vector<std::optional<double>> expected_center_distance_mm;
  std::optional<double> expected_ratio;
};

struct GeneratorConfig {
  std::optional<double> k_g;  // key: k_g_v_per_rad_s
  std::optional<double> r_internal_ohm;
  std::optional<double> ratio;  // defaults to the gear train's overall ratio
};

struct SimulateConfig {
  std::optional<double> r_load_ohm;
  std::vector<double> grid_ohm;
  /// Capacitor charging power; defaults to the chain's mean output power.
  std::optional<double> charging_power_w;
};

struct PathsConfig {
  std::optional<std::string> sweep_csv;  // measured sweep input for `fit`
  std::optional<std::string> out_dir;    // overridden by the CLI --out flag
};

struct FitConfig {
  /// RMS arm speed during the bench sweep. Only the product
  /// E = k_g * ratio * omega_rms is observable from a sweep, so k_g is
  /// recovered only when this and a ratio are supplied.
  std::optional<double> omega_arm_rms_rad_s;
};

struct ToolkitConfig {
  std::optional<KinematicsConfig> kinematics;
  std::optional<GearTrainConfig> geartrain;
  GeneratorConfig generator;
  std::optional<SwingProfile> swing;
  std::optional<CapacitorSpec> capacitor;
  SimulateConfig simulate;
  FitConfig fit;
  PathsConfig paths;

  /// Generator parameters with the ratio defaulted from the gear train.
  /// Throws ConfigError naming the missing field when underspecified.
  GeneratorParams resolved_generator() const;

  /// Ratio from generator.ratio, else the gear train; nullopt when neither
  /// block supplies one.
  std::optional<double> resolved_ratio() const;
};

ToolkitConfig parse_config(const std::string& json_text,
                           const std::string& source_name = "<string>");
ToolkitConfig load_config(const std::filesystem::path& file);

}  // namespace harvestsim
