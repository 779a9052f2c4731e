#include "harvestsim/geartrain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "harvestsim/io.hpp"

namespace harvestsim {

double pitch_diameter(const GearStage& stage, GearSide side) {
  const int teeth = side == GearSide::Large ? stage.teeth_large : stage.teeth_small;
  return stage.module_mm * static_cast<double>(teeth);
}

double mesh_center_distance(const GearStage& upstream, const GearStage& downstream) {
  if (upstream.module_mm != downstream.module_mm) {
    throw IncompatibleMeshError("mesh " + upstream.id + "->" + downstream.id +
                                ": module mismatch (" + format_double(upstream.module_mm) +
                                " vs " + format_double(downstream.module_mm) + ")");
  }
  return (pitch_diameter(upstream, GearSide::Large) +
          pitch_diameter(downstream, GearSide::Small)) / 2.0;
}

double overall_ratio(const GearTrain& train) {
  if (train.stages.empty()) {
    throw ConfigError("gear train must have at least one stage");
  }
  double ratio = 1.0;
  for (std::size_t i = 0; i + 1 < train.stages.size(); ++i) {
    ratio *= static_cast<double>(train.stages[i].teeth_large) /
             static_cast<double>(train.stages[i + 1].teeth_small);
  }
  return ratio;
}

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Warn: return "warn";
    case CheckStatus::Fail: return "fail";
  }
  return "fail";
}

bool ValidationReport::all_passed() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const CheckResult& c) { return c.status == CheckStatus::Fail; });
}

bool ValidationReport::has_warnings() const {
  return std::any_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.status == CheckStatus::Warn; });
}

std::size_t ValidationReport::failed_count() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(),
                    [](const CheckResult& c) { return c.status == CheckStatus::Fail; }));
}

void validate_stage_fields(const GearStage& stage) {
  if (!(stage.module_mm > 0.0) || !std::isfinite(stage.module_mm)) {
    throw ConfigError("stage " + stage.id + ": module_mm must be > 0");
  }
  if (stage.teeth_small < 1) {
    throw ConfigError("stage " + stage.id + ": teeth_small must be >= 1");
  }
  if (stage.teeth_large < stage.teeth_small) {
    throw ConfigError("stage " + stage.id + ": teeth_large must be >= teeth_small");
  }
}

namespace {

constexpr double kCenterDistanceTolMm = 1e-9;
constexpr double kRatioWarnRelative = 0.01;

}  // namespace

ValidationReport validate_train(
    const GearTrain& train,
    const std::vector<std::optional<double>>& expected_center_distances_mm,
    std::optional<double> expected_ratio) {
  ValidationReport report;
  auto add = [&](std::string name, CheckStatus status, std::string detail) {
    report.checks.push_back({std::move(name), status, std::move(detail)});
  };

  if (train.stages.empty()) {
    add("train non-empty", CheckStatus::Fail, "train has no stages");
    return report;
  }
  add("train non-empty", CheckStatus::Pass,
      std::to_string(train.stages.size()) + " stages");

  bool uniform = true;
  std::string modules;
  for (const GearStage& stage : train.stages) {
    if (!modules.empty()) modules += ", ";
    modules += stage.id + "=" + format_double(stage.module_mm);
    if (stage.module_mm != train.stages.front().module_mm) uniform = false;
  }
  add("uniform module", uniform ? CheckStatus::Pass : CheckStatus::Fail, modules);

  for (const GearStage& stage : train.stages) {
    bool fields_ok = true;
    try {
      validate_stage_fields(stage);
    } catch (const ConfigError&) {
      fields_ok = false;
    }
    const double pd_large = pitch_diameter(stage, GearSide::Large);
    const double pd_small = pitch_diameter(stage, GearSide::Small);
    const bool consistent =
        pd_large == stage.module_mm * stage.teeth_large &&
        pd_small == stage.module_mm * stage.teeth_small;
    add("pitch diameters (" + stage.id + ")",
        fields_ok && consistent ? CheckStatus::Pass : CheckStatus::Fail,
        "large " + format_double(pd_large) + " mm, small " + format_double(pd_small) +
            " mm" + (fields_ok ? "" : " (invalid stage fields)"));
  }

  const std::size_t mesh_count = train.stages.size() - 1;
  if (!expected_center_distances_mm.empty() &&
      expected_center_distances_mm.size() != mesh_count) {
    add("expected center distance count", CheckStatus::Fail,
        "got " + std::to_string(expected_center_distances_mm.size()) + " entries for " +
            std::to_string(mesh_count) + " meshes");
  }

  for (std::size_t i = 0; i < mesh_count; ++i) {
    const GearStage& up = train.stages[i];
    const GearStage& down = train.stages[i + 1];
    const std::string name = "center distance (" + up.id + "->" + down.id + ")";
    if (up.module_mm != down.module_mm) {
      add(name, CheckStatus::Fail,
          "module mismatch (" + format_double(up.module_mm) + " vs " +
              format_double(down.module_mm) + ")");
      continue;
    }
    const double observed = mesh_center_distance(up, down);
    std::optional<double> expected;
    if (i < expected_center_distances_mm.size()) expected = expected_center_distances_mm[i];
    if (!expected) {
      add(name, CheckStatus::Pass, format_double(observed) + " mm");
    } else if (std::abs(observed - *expected) <= kCenterDistanceTolMm) {
      add(name, CheckStatus::Pass,
          format_double(observed) + " mm matches expected " + format_double(*expected));
    } else {
      add(name, CheckStatus::Fail,
          "observed " + format_double(observed) + " mm, expected " +
              format_double(*expected) + " mm");
    }
  }

  if (expected_ratio) {
    const double ratio = overall_ratio(train);
    const double deviation = std::abs(ratio - *expected_ratio) / std::abs(*expected_ratio);
    if (deviation > kRatioWarnRelative) {
      std::ostringstream os;
      os << "computed ratio " << format_double(ratio) << " deviates from expected "
         << format_double(*expected_ratio) << " by " << format_double(deviation * 100.0)
         << "%";
      add("expected overall ratio", CheckStatus::Warn, os.str());
    } else {
      add("expected overall ratio", CheckStatus::Pass,
          format_double(ratio) + " within 1% of expected " + format_double(*expected_ratio));
    }
  }

  return report;
}

}  // namespace harvestsim
