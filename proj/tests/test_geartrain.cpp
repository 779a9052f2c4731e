#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "doctest.h"

#include "harvestsim/geartrain.hpp"

using namespace harvestsim;

namespace {

// Reference five-stage gearbox (module 0.5 mm, double-sided spur gears).
GearTrain reference_train() {
  GearTrain train;
  train.stages = {
      {"G1", 0.5, 42, 18},
      {"G2", 0.5, 40, 20},
      {"G3", 0.5, 32, 22},
      {"G4", 0.5, 30, 14},
      {"G5", 0.5, 10, 10},
  };
  return train;
}

constexpr double kReferenceRatio = 2016.0 / 77.0;  // (42/20)(40/22)(32/14)(30/10)

}  // namespace

TEST_CASE("pitch_diameter is module times teeth") {
  CHECK(pitch_diameter({"G1", 0.5, 42, 18}, GearSide::Large) == 21.0);
  CHECK(pitch_diameter({"G5", 0.5, 10, 10}, GearSide::Small) == 5.0);
  CHECK(pitch_diameter({"U", 1.0, 1, 1}, GearSide::Large) == 1.0);
}

TEST_CASE("mesh_center_distance is the mean of the meshing pitch diameters") {
  const GearTrain train = reference_train();
  CHECK(mesh_center_distance(train.stages[0], train.stages[1]) == 15.5);  // (21+10)/2
  CHECK(mesh_center_distance(train.stages[1], train.stages[2]) == 15.5);  // (20+11)/2
  CHECK(mesh_center_distance(train.stages[2], train.stages[3]) == 11.5);  // (16+7)/2
  CHECK(mesh_center_distance(train.stages[3], train.stages[4]) == 10.0);  // (15+5)/2
}

TEST_CASE("mesh_center_distance rejects module mismatches") {
  const GearStage a{"A", 0.5, 42, 18};
  const GearStage b{"B", 0.6, 40, 20};
  CHECK_THROWS_AS(mesh_center_distance(a, b), IncompatibleMeshError);
}

TEST_CASE("twice the center distance equals module times the meshing tooth sum") {
  std::mt19937 rng(33);
  std::uniform_int_distribution<int> teeth(1, 120);
  const double modules[] = {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0};
  for (int rep = 0; rep < 200; ++rep) {
    const double module = modules[rep % 7];
    const int large_up = teeth(rng);
    const int small_down = teeth(rng);
    const GearStage up{"U", module, std::max(large_up, 1), 1};
    const GearStage down{"D", module, 120, std::max(small_down, 1)};
    const double cd = mesh_center_distance(up, down);
    CHECK(2.0 * cd == module * (up.teeth_large + down.teeth_small));
  }
}

TEST_CASE("overall_ratio of the reference train") {
  CHECK(overall_ratio(reference_train()) ==
        doctest::Approx(kReferenceRatio).epsilon(1e-14));
  CHECK(std::abs(overall_ratio(reference_train()) - 26.18) <= 0.01);
}

TEST_CASE("overall_ratio basics") {
  GearTrain single;
  single.stages = {{"G1", 0.5, 42, 18}};
  CHECK(overall_ratio(single) == 1.0);

  GearTrain two;
  two.stages = {{"G1", 0.5, 42, 18}, {"G2", 0.5, 40, 20}};
  CHECK(overall_ratio(two) == doctest::Approx(2.1).epsilon(1e-14));

  GearTrain empty;
  CHECK_THROWS_AS(overall_ratio(empty), ConfigError);
}

TEST_CASE("overall_ratio is multiplicative under concatenation") {
  std::mt19937 rng(77);
  std::uniform_int_distribution<int> small(5, 30);
  std::uniform_int_distribution<int> extra(0, 40);
  for (int rep = 0; rep < 50; ++rep) {
    auto random_train = [&](int stages) {
      GearTrain t;
      for (int i = 0; i < stages; ++i) {
        const int s = small(rng);
        t.stages.push_back({"S" + std::to_string(i), 0.5, s + extra(rng), s});
      }
      return t;
    };
    const GearTrain a = random_train(3);
    const GearTrain b = random_train(2);
    GearTrain joined = a;
    joined.stages.insert(joined.stages.end(), b.stages.begin(), b.stages.end());
    const double mesh_ratio = static_cast<double>(a.stages.back().teeth_large) /
                              static_cast<double>(b.stages.front().teeth_small);
    const double expected = overall_ratio(a) * mesh_ratio * overall_ratio(b);
    CHECK(overall_ratio(joined) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("overall_ratio ignores the module") {
  GearTrain train = reference_train();
  const double base = overall_ratio(train);
  for (GearStage& stage : train.stages) stage.module_mm = 1.25;
  CHECK(overall_ratio(train) == base);
}

TEST_CASE("validate_train passes on the reference train with derived distances") {
  const std::vector<std::optional<double>> expected{15.5, 15.5, 11.5, 10.0};
  const ValidationReport report = validate_train(reference_train(), expected);
  CHECK(report.all_passed());
  CHECK(!report.has_warnings());
}

TEST_CASE("validate_train flags the published distance that conflicts with the teeth") {
  // The reference data sheet lists 12 mm for the G3->G4 mesh, which implies a
  // 17 mm large-gear pitch diameter on G3; the printed 32 teeth at module 0.5
  // give 16 mm and a derived distance of 11.5 mm. The check reports the
  // conflict instead of guessing which figure is the typo.
  const std::vector<std::optional<double>> published{15.5, 15.5, 12.0, 10.0};
  const ValidationReport report = validate_train(reference_train(), published);
  CHECK(!report.all_passed());
  CHECK(report.failed_count() == 1);
  bool found = false;
  for (const CheckResult& check : report.checks) {
    if (check.name == "center distance (G3->G4)") {
      CHECK(check.status == CheckStatus::Fail);
      found = true;
    } else {
      CHECK(check.status != CheckStatus::Fail);
    }
  }
  CHECK(found);
}

TEST_CASE("validate_train fails a wrong expected distance") {
  const std::vector<std::optional<double>> expected{14.0, std::nullopt, std::nullopt,
                                                    std::nullopt};
  const ValidationReport report = validate_train(reference_train(), expected);
  CHECK(!report.all_passed());
  CHECK(report.failed_count() == 1);
  CHECK(report.checks.size() > 1);
  for (const CheckResult& check : report.checks) {
    if (check.name == "center distance (G1->G2)") {
      CHECK(check.status == CheckStatus::Fail);
      CHECK(check.detail.find("15.5") != std::string::npos);
      CHECK(check.detail.find("14") != std::string::npos);
    }
  }
}

TEST_CASE("validate_train fails on mixed modules") {
  GearTrain train = reference_train();
  train.stages[2].module_mm = 0.6;
  const ValidationReport report = validate_train(train);
  CHECK(!report.all_passed());
  bool uniform_failed = false;
  for (const CheckResult& check : report.checks) {
    if (check.name == "uniform module") uniform_failed = check.status == CheckStatus::Fail;
  }
  CHECK(uniform_failed);
}

TEST_CASE("validate_train warns when the expected ratio deviates by more than 1%") {
  const ValidationReport warn = validate_train(reference_train(), {}, 27.2);
  CHECK(warn.all_passed());
  CHECK(warn.has_warnings());

  const ValidationReport ok = validate_train(reference_train(), {}, 26.18);
  CHECK(ok.all_passed());
  CHECK(!ok.has_warnings());
}

TEST_CASE("validate_train rejects a malformed expected-distance list") {
  const std::vector<std::optional<double>> wrong_size{15.5, 15.5};
  const ValidationReport report = validate_train(reference_train(), wrong_size);
  CHECK(!report.all_passed());
}

TEST_CASE("validate_stage_fields enforces the stage invariants") {
  CHECK_THROWS_AS(validate_stage_fields({"X", 0.0, 10, 5}), ConfigError);
  CHECK_THROWS_AS(validate_stage_fields({"X", 0.5, 10, 0}), ConfigError);
  CHECK_THROWS_AS(validate_stage_fields({"X", 0.5, 5, 10}), ConfigError);
  CHECK_NOTHROW(validate_stage_fields({"X", 0.5, 10, 10}));
}
