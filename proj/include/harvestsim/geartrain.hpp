#pragma once

#include <optional>
#include <string>
#include <vector>

#include "harvestsim/errors.hpp"

namespace harvestsim {

/// One double-sided spur gear: a large and a small toothed wheel sharing a
/// shaft. teeth_large >= teeth_small >= 1; module_mm > 0.
struct GearStage {
  std::string id;
  double module_mm = 0.0;
  int teeth_large = 0;
  int teeth_small = 0;
};

enum class GearSide { Large, Small };

/// Pitch diameter in millimeters: module x tooth count of the chosen side.
double pitch_diameter(const GearStage& stage, GearSide side);

/// Shaft spacing of the mesh where `upstream`'s large gear drives
/// `downstream`'s small gear: mean of the two pitch diameters. Throws
/// IncompatibleMeshError when the modules differ.
double mesh_center_distance(const GearStage& upstream, const GearStage& downstream);

/// Ordered gear train, input stage first. The large gear of stage i meshes
/// with the small gear of stage i+1.
struct GearTrain {
  std::vector<GearStage> stages;
};

/// Speed multiplication from the input shaft to the output shaft: product
/// over consecutive meshes of (upstream teeth_large / downstream
/// teeth_small). A single-stage train has ratio 1. Tooth counts alone
/// determine the ratio; the module does not enter.
double overall_ratio(const GearTrain& train);

enum class CheckStatus { Pass, Warn, Fail };

std::string to_string(CheckStatus status);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool all_passed() const;  // no Fail entries (Warn entries do not fail)
  bool has_warnings() const;
  std::size_t failed_count() const;
};

/// Throws ConfigError when a stage violates the GearStage invariants.
void validate_stage_fields(const GearStage& stage);

/// Structural validation: uniform module, pitch-diameter consistency, and —
/// when expected values are supplied — per-mesh center distances within
/// 1e-9 mm and the overall ratio within 1% (deviation beyond 1% is a Warn
/// entry, not a failure). Failures are report entries; this never throws.
/// `expected_center_distances_mm` must be empty or hold one optional entry
/// per mesh (stages - 1).
ValidationReport validate_train(
    const GearTrain& train,
    const std::vector<std::optional<double>>& expected_center_distances_mm = {},
    std::optional<double> expected_ratio = std::nullopt);

}  // namespace harvestsim
