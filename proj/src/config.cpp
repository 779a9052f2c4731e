#include "harvestsim/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace harvestsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void reject_unknown_keys(const json& j, const std::string& path,
                         const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items()) {
    if (allowed.find(key) == allowed.end()) {
      fail(path + "." + key, "unknown key");
    }
  }
}

double get_double(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) fail(path + "." + key, "missing required field");
  const json& v = j.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

std::optional<double> get_optional_double(const json& j, const std::string& path,
                                          const std::string& key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_number()) fail(path + "." + key, "expected a number");
  return j.at(key).get<double>();
}

int get_int(const json& j, const std::string& path, const std::string& key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) fail(path + "." + key, "expected an integer");
  return j.at(key).get<int>();
}

std::string get_string(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) fail(path + "." + key, "missing required field");
  if (!j.at(key).is_string()) fail(path + "." + key, "expected a string");
  return j.at(key).get<std::string>();
}

KinematicsConfig parse_kinematics(const json& j) {
  const std::string path = "kinematics";
  require_object(j, path);
  reject_unknown_keys(j, path,
                      {"visibility_threshold", "smoothing_window", "joints", "inputs"});

  KinematicsConfig cfg;
  if (auto v = get_optional_double(j, path, "visibility_threshold")) {
    if (*v < 0.0 || *v > 1.0) fail(path + ".visibility_threshold", "must lie in [0, 1]");
    cfg.visibility_threshold = *v;
  }
  cfg.smoothing_window = get_int(j, path, "smoothing_window", kDefaultSmoothingWindow);
  if (cfg.smoothing_window < 1 || cfg.smoothing_window % 2 == 0) {
    fail(path + ".smoothing_window", "must be an odd positive integer");
  }

  if (j.contains("joints")) {
    if (!j.at("joints").is_array()) fail(path + ".joints", "expected an array");
    std::size_t index = 0;
    for (const json& item : j.at("joints")) {
      const std::string jpath = path + ".joints[" + std::to_string(index++) + "]";
      require_object(item, jpath);
      reject_unknown_keys(item, jpath, {"name", "proximal", "vertex", "distal"});
      JointDefinition def;
      def.name = get_string(item, jpath, "name");
      def.proximal = get_string(item, jpath, "proximal");
      def.vertex = get_string(item, jpath, "vertex");
      def.distal = get_string(item, jpath, "distal");
      if (def.proximal == def.vertex || def.vertex == def.distal ||
          def.proximal == def.distal) {
        fail(jpath, "proximal, vertex, and distal must be three distinct landmarks");
      }
      cfg.joints.push_back(std::move(def));
    }
  }

  if (j.contains("inputs")) {
    if (!j.at("inputs").is_array()) fail(path + ".inputs", "expected an array");
    std::size_t index = 0;
    for (const json& item : j.at("inputs")) {
      const std::string ipath = path + ".inputs[" + std::to_string(index++) + "]";
      require_object(item, ipath);
      reject_unknown_keys(item, ipath, {"label", "file", "speed_kmh", "gait", "joint"});
      KinematicsInputConfig input;
      input.label = get_string(item, ipath, "label");
      input.file = get_string(item, ipath, "file");
      input.speed_kmh = get_double(item, ipath, "speed_kmh");
      input.gait = gait_from_string(get_string(item, ipath, "gait"));
      input.joint = get_string(item, ipath, "joint");
      cfg.inputs.push_back(std::move(input));
    }
  }
  return cfg;
}

GearTrainConfig parse_geartrain(const json& j) {
  const std::string path = "geartrain";
  require_object(j, path);
  reject_unknown_keys(j, path, {"stages", "expected_ratio"});
  if (!j.contains("stages") || !j.at("stages").is_array() || j.at("stages").empty()) {
    fail(path + ".stages", "at least one stage is required");
  }

  GearTrainConfig cfg;
  std::size_t index = 0;
  for (const json& item : j.at("stages")) {
    const std::string spath = path + ".stages[" + std::to_string(index) + "]";
    require_object(item, spath);
    reject_unknown_keys(item, spath,
                        {"id", "module_mm", "teeth_large", "teeth_small",
                         "expected_center_distance_mm"});
    GearStage stage;
    stage.id = get_string(item, spath, "id");
    stage.module_mm = get_double(item, spath, "module_mm");
    stage.teeth_large = get_int(item, spath, "teeth_large", 0);
    stage.teeth_small = get_int(item, spath, "teeth_small", 0);
    try {
      validate_stage_fields(stage);
    } catch (const ConfigError& e) {
      fail(spath, e.what());
    }

    const auto expected = get_optional_double(item, spath, "expected_center_distance_mm");
    if (index == 0 && expected) {
      fail(spath + ".expected_center_distance_mm",
           "the first stage has no upstream mesh");
    }
    if (index > 0) cfg.expected_center_distance_mm.push_back(expected);
    cfg.train.stages.push_back(std::move(stage));
    ++index;
  }
  cfg.expected_ratio = get_optional_double(j, path, "expected_ratio");
  return cfg;
}

GeneratorConfig parse_generator(const json& j) {
  const std::string path = "generator";
  require_object(j, path);
  reject_unknown_keys(j, path, {"k_g_v_per_rad_s", "r_internal_ohm", "ratio"});
  GeneratorConfig cfg;
  cfg.k_g = get_optional_double(j, path, "k_g_v_per_rad_s");
  if (cfg.k_g && !(*cfg.k_g > 0.0)) fail(path + ".k_g_v_per_rad_s", "must be > 0");
  cfg.r_internal_ohm = get_optional_double(j, path, "r_internal_ohm");
  if (cfg.r_internal_ohm && *cfg.r_internal_ohm < 0.0) {
    fail(path + ".r_internal_ohm", "must be >= 0");
  }
  cfg.ratio = get_optional_double(j, path, "ratio");
  if (cfg.ratio && !(*cfg.ratio > 0.0)) fail(path + ".ratio", "must be > 0");
  return cfg;
}

SwingProfile parse_swing(const json& j) {
  const std::string path = "swing";
  require_object(j, path);
  reject_unknown_keys(j, path,
                      {"angle_min_deg", "angle_max_deg", "cadence_hz", "duration_s",
                       "sample_rate_hz"});
  SwingProfile profile;
  profile.angle_min_deg = get_double(j, path, "angle_min_deg");
  profile.angle_max_deg = get_double(j, path, "angle_max_deg");
  profile.cadence_hz = get_double(j, path, "cadence_hz");
  profile.duration_s = get_double(j, path, "duration_s");
  profile.sample_rate_hz = get_double(j, path, "sample_rate_hz");
  validate_profile(profile);
  return profile;
}

CapacitorSpec parse_capacitor(const json& j) {
  const std::string path = "capacitor";
  require_object(j, path);
  reject_unknown_keys(j, path, {"capacitance_f", "rated_voltage_v", "initial_voltage_v"});
  CapacitorSpec cap;
  cap.capacitance_f = get_double(j, path, "capacitance_f");
  cap.rated_voltage_v = get_double(j, path, "rated_voltage_v");
  cap.initial_voltage_v = get_optional_double(j, path, "initial_voltage_v").value_or(0.0);
  validate_capacitor(cap);
  return cap;
}

SimulateConfig parse_simulate(const json& j) {
  const std::string path = "simulate";
  require_object(j, path);
  reject_unknown_keys(j, path, {"r_load_ohm", "grid_ohm", "charging_power_w"});
  SimulateConfig cfg;
  cfg.r_load_ohm = get_optional_double(j, path, "r_load_ohm");
  if (cfg.r_load_ohm && !(*cfg.r_load_ohm > 0.0)) fail(path + ".r_load_ohm", "must be > 0");
  cfg.charging_power_w = get_optional_double(j, path, "charging_power_w");
  if (cfg.charging_power_w && *cfg.charging_power_w < 0.0) {
    fail(path + ".charging_power_w", "must be >= 0");
  }

  if (j.contains("grid_ohm")) {
    const json& grid = j.at("grid_ohm");
    if (grid.is_array()) {
      for (const json& v : grid) {
        if (!v.is_number() || !(v.get<double>() > 0.0)) {
          fail(path + ".grid_ohm", "entries must be positive numbers");
        }
        cfg.grid_ohm.push_back(v.get<double>());
      }
      if (cfg.grid_ohm.empty()) fail(path + ".grid_ohm", "grid must not be empty");
    } else if (grid.is_object()) {
      const std::string gpath = path + ".grid_ohm";
      reject_unknown_keys(grid, gpath, {"min_ohm", "max_ohm", "step_ohm"});
      const double min = get_double(grid, gpath, "min_ohm");
      const double max = get_double(grid, gpath, "max_ohm");
      const double step = get_double(grid, gpath, "step_ohm");
      if (!(min > 0.0) || !(step > 0.0) || max < min) {
        fail(gpath, "requires 0 < min_ohm <= max_ohm and step_ohm > 0");
      }
      const auto count =
          static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
      for (std::size_t k = 0; k < count; ++k) {
        cfg.grid_ohm.push_back(min + step * static_cast<double>(k));
      }
    } else {
      fail(path + ".grid_ohm", "expected an array or {min_ohm, max_ohm, step_ohm}");
    }
  }
  return cfg;
}

PathsConfig parse_paths(const json& j) {
  const std::string path = "paths";
  require_object(j, path);
  reject_unknown_keys(j, path, {"sweep_csv", "out_dir"});
  PathsConfig cfg;
  if (j.contains("sweep_csv")) cfg.sweep_csv = get_string(j, path, "sweep_csv");
  if (j.contains("out_dir")) cfg.out_dir = get_string(j, path, "out_dir");
  return cfg;
}

FitConfig parse_fit(const json& j) {
  const std::string path = "fit";
  require_object(j, path);
  reject_unknown_keys(j, path, {"omega_arm_rms_rad_s"});
  FitConfig cfg;
  cfg.omega_arm_rms_rad_s = get_optional_double(j, path, "omega_arm_rms_rad_s");
  if (cfg.omega_arm_rms_rad_s && !(*cfg.omega_arm_rms_rad_s > 0.0)) {
    fail(path + ".omega_arm_rms_rad_s", "must be > 0");
  }
  return cfg;
}

}  // namespace

GeneratorParams ToolkitConfig::resolved_generator() const {
  GeneratorParams params;
  if (!generator.k_g) {
    throw ConfigError("generator.k_g_v_per_rad_s: required for simulation");
  }
  params.k_g = *generator.k_g;
  if (!generator.r_internal_ohm) {
    throw ConfigError("generator.r_internal_ohm: required for simulation");
  }
  params.r_internal_ohm = *generator.r_internal_ohm;
  const std::optional<double> ratio = resolved_ratio();
  if (!ratio) {
    throw ConfigError("generator.ratio: required when no geartrain block is present");
  }
  params.ratio = *ratio;
  return params;
}

std::optional<double> ToolkitConfig::resolved_ratio() const {
  if (generator.ratio) return generator.ratio;
  if (geartrain) return overall_ratio(geartrain->train);
  return std::nullopt;
}

ToolkitConfig parse_config(const std::string& json_text, const std::string& source_name) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(source_name + ": invalid JSON: " + e.what());
  }
  if (!j.is_object()) {
    throw ConfigError(source_name + ": top level must be an object");
  }
  reject_unknown_keys(j, "config",
                      {"kinematics", "geartrain", "generator", "swing", "capacitor",
                       "simulate", "fit", "paths"});

  ToolkitConfig cfg;
  if (j.contains("kinematics")) cfg.kinematics = parse_kinematics(j.at("kinematics"));
  if (j.contains("geartrain")) cfg.geartrain = parse_geartrain(j.at("geartrain"));
  if (j.contains("generator")) cfg.generator = parse_generator(j.at("generator"));
  if (j.contains("swing")) cfg.swing = parse_swing(j.at("swing"));
  if (j.contains("capacitor")) cfg.capacitor = parse_capacitor(j.at("capacitor"));
  if (j.contains("simulate")) cfg.simulate = parse_simulate(j.at("simulate"));
  if (j.contains("fit")) cfg.fit = parse_fit(j.at("fit"));
  if (j.contains("paths")) cfg.paths = parse_paths(j.at("paths"));
  return cfg;
}

ToolkitConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw UsageError("file not found: " + file.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), file.string());
}

}  // namespace harvestsim
