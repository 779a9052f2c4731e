#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

std::string binary_path() {
  if (const char* bin = std::getenv("HARVESTSIM_BIN")) return bin;
#ifdef HARVESTSIM_BIN_DEFAULT
  return HARVESTSIM_BIN_DEFAULT;
#else
  FAIL("HARVESTSIM_BIN must point at the harvestsim binary");
  return "";
#endif
}

struct RunResult {
  int exit_code = -1;
  std::string output;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing file: " << path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void spit(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << content;
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    dir_ = fs::temp_directory_path() /
           ("harvestsim_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  const fs::path& path() const { return dir_; }

 private:
  fs::path dir_;
};

RunResult run(const TempDir& dir, const std::string& args) {
  const fs::path log = dir.path() / "run.log";
  const std::string cmd =
      "'" + binary_path() + "' " + args + " > '" + log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.output = slurp(log);
  return result;
}

// Landmark CSV with the elbow angle following theta(t); wrist fixed along +x.
std::string landmark_csv(double mid, double amplitude, double freq_hz, double rate_hz,
                         double duration_s) {
  std::ostringstream out;
  out << "t,shoulder_x,shoulder_y,elbow_x,elbow_y,wrist_x,wrist_y\n";
  const int count = static_cast<int>(duration_s * rate_hz) + 1;
  for (int k = 0; k < count; ++k) {
    const double t = k / rate_hz;
    const double theta =
        mid + amplitude * std::sin(2.0 * std::numbers::pi * freq_hz * t);
    out << t << ',' << 0.5 + 0.3 * std::cos(theta) << ',' << 0.5 + 0.3 * std::sin(theta)
        << ",0.5,0.5,0.8,0.5\n";
  }
  return out.str();
}

const char* kAnalyzeJointBlock = R"(
    "joints": [
      {"name": "elbow", "proximal": "shoulder", "vertex": "elbow", "distal": "wrist"}
    ],)";

std::string geartrain_config(const std::string& extra_stage_fields,
                             const std::string& train_extra) {
  return std::string(R"({
  "geartrain": {)") +
         train_extra + R"(
    "stages": [
      {"id": "G1", "module_mm": 0.5, "teeth_large": 42, "teeth_small": 18},
      {"id": "G2", "module_mm": 0.5, "teeth_large": 40, "teeth_small": 20)" +
         extra_stage_fields + R"(},
      {"id": "G3", "module_mm": 0.5, "teeth_large": 32, "teeth_small": 22},
      {"id": "G4", "module_mm": 0.5, "teeth_large": 30, "teeth_small": 14},
      {"id": "G5", "module_mm": 0.5, "teeth_large": 10, "teeth_small": 10}
    ]
  }
})";
}

}  // namespace

TEST_CASE("cli usage errors exit with code 2") {
  TempDir dir;
  CHECK(run(dir, "").exit_code == 2);
  CHECK(run(dir, "frobnicate --config x.json").exit_code == 2);
  CHECK(run(dir, "analyze").exit_code == 2);  // --config is required
  CHECK(run(dir, "analyze --config /nonexistent.json").exit_code == 2);
  const RunResult version = run(dir, "--version");
  CHECK(version.exit_code == 0);
  CHECK(version.output.find("0.1.0") != std::string::npos);
  CHECK(run(dir, "--help").exit_code == 0);
}

TEST_CASE("cli analyze ranks a fast elbow above a slow trunk") {
  TempDir dir;
  spit(dir.path() / "elbow.csv", landmark_csv(1.57, 0.5, 2.0, 100.0, 2.0));
  spit(dir.path() / "trunk.csv", landmark_csv(1.57, 0.05, 0.5, 100.0, 2.0));
  spit(dir.path() / "config.json", std::string(R"({
  "kinematics": {)") + kAnalyzeJointBlock + R"(
    "inputs": [
      {"label": "elbow", "file": "elbow.csv", "speed_kmh": 6, "gait": "walking", "joint": "elbow"},
      {"label": "trunk", "file": "trunk.csv", "speed_kmh": 6, "gait": "walking", "joint": "elbow"}
    ]
  }
})");
  const fs::path out = dir.path() / "out";
  const RunResult result = run(dir, "analyze --config '" + (dir.path() / "config.json").string() +
                                        "' --out '" + out.string() + "'");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("best joint: elbow") != std::string::npos);

  const auto report = nlohmann::json::parse(slurp(out / "comparison.json"));
  CHECK(report.at("best_overall").at("joint") == "elbow");
  CHECK(report.at("rows").size() == 2);

  const std::string csv = slurp(out / "comparison.csv");
  CHECK(csv.find("joint,gait,speed_kmh,rms_rad_s") != std::string::npos);
  CHECK(csv.find("elbow,walking,6,") != std::string::npos);
}

TEST_CASE("cli analyze error paths") {
  TempDir dir;

  SUBCASE("missing landmark file") {
    spit(dir.path() / "config.json", std::string(R"({
  "kinematics": {)") + kAnalyzeJointBlock + R"(
    "inputs": [
      {"label": "elbow", "file": "missing.csv", "speed_kmh": 6, "gait": "walking", "joint": "elbow"}
    ]
  }
})");
    const RunResult result =
        run(dir, "analyze --config '" + (dir.path() / "config.json").string() + "'");
    CHECK(result.exit_code == 2);
    CHECK(result.output.find("missing.csv") != std::string::npos);
  }

  SUBCASE("empty joint list") {
    spit(dir.path() / "elbow.csv", landmark_csv(1.57, 0.5, 2.0, 100.0, 1.0));
    spit(dir.path() / "config.json", R"({
  "kinematics": {
    "joints": [],
    "inputs": [
      {"label": "elbow", "file": "elbow.csv", "speed_kmh": 6, "gait": "walking", "joint": "elbow"}
    ]
  }
})");
    const RunResult result =
        run(dir, "analyze --config '" + (dir.path() / "config.json").string() + "'");
    CHECK(result.exit_code == 2);
    CHECK(result.output.find("joint") != std::string::npos);
  }

  SUBCASE("malformed landmark row is named") {
    spit(dir.path() / "bad.csv",
         "t,shoulder_x,shoulder_y,elbow_x,elbow_y,wrist_x,wrist_y\n"
         "0,0.1,0.9,0.5,0.5,0.8,0.5\n"
         "0.01,0.1,oops,0.5,0.5,0.8,0.5\n");
    spit(dir.path() / "config.json", std::string(R"({
  "kinematics": {)") + kAnalyzeJointBlock + R"(
    "inputs": [
      {"label": "elbow", "file": "bad.csv", "speed_kmh": 6, "gait": "walking", "joint": "elbow"}
    ]
  }
})");
    const RunResult result =
        run(dir, "analyze --config '" + (dir.path() / "config.json").string() + "'");
    CHECK(result.exit_code == 2);
    CHECK(result.output.find("bad.csv:3") != std::string::npos);
  }
}

TEST_CASE("cli geartrain prints the ratio and warns about the expected ratio") {
  TempDir dir;
  spit(dir.path() / "config.json", geartrain_config("", "\n    \"expected_ratio\": 27.2,"));
  const fs::path out = dir.path() / "out";
  const RunResult result = run(dir, "geartrain --config '" +
                                        (dir.path() / "config.json").string() + "' --out '" +
                                        out.string() + "'");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("overall ratio: 26.18") != std::string::npos);
  CHECK(result.output.find("warning:") != std::string::npos);
  CHECK(result.output.find("27.2") != std::string::npos);
  CHECK(result.output.find("mesh G1->G2: center distance 15.5 mm") != std::string::npos);
  CHECK(result.output.find("mesh G3->G4: center distance 11.5 mm") != std::string::npos);

  const auto report = nlohmann::json::parse(slurp(out / "geartrain_report.json"));
  CHECK(report.at("all_passed") == true);
  CHECK(report.at("warnings") == true);
  CHECK(std::abs(report.at("overall_ratio").get<double>() - 26.1818181818) < 1e-6);
}

TEST_CASE("cli geartrain single stage") {
  TempDir dir;
  spit(dir.path() / "config.json", R"({
  "geartrain": {
    "stages": [{"id": "G1", "module_mm": 0.5, "teeth_large": 42, "teeth_small": 18}]
  }
})");
  const RunResult result =
      run(dir, "geartrain --config '" + (dir.path() / "config.json").string() + "'");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("overall ratio: 1") != std::string::npos);
  CHECK(result.output.find("mesh") == std::string::npos);
}

TEST_CASE("cli geartrain failures") {
  TempDir dir;

  SUBCASE("expected center distance mismatch fails validation") {
    spit(dir.path() / "config.json",
         geartrain_config(", \"expected_center_distance_mm\": 14.0", ""));
    const RunResult result =
        run(dir, "geartrain --config '" + (dir.path() / "config.json").string() + "'");
    CHECK(result.exit_code == 1);
    CHECK(result.output.find("[fail]") != std::string::npos);
  }

  SUBCASE("mixed modules fail validation") {
    spit(dir.path() / "config.json", R"({
  "geartrain": {
    "stages": [
      {"id": "G1", "module_mm": 0.5, "teeth_large": 42, "teeth_small": 18},
      {"id": "G2", "module_mm": 0.6, "teeth_large": 40, "teeth_small": 20}
    ]
  }
})");
    const RunResult result =
        run(dir, "geartrain --config '" + (dir.path() / "config.json").string() + "'");
    CHECK(result.exit_code == 1);
    CHECK(result.output.find("uniform module") != std::string::npos);
  }

  SUBCASE("invalid stage rejected at load") {
    spit(dir.path() / "config.json", R"({
  "geartrain": {
    "stages": [{"id": "G1", "module_mm": 0.5, "teeth_large": 10, "teeth_small": 20}]
  }
})");
    const RunResult result =
        run(dir, "geartrain --config '" + (dir.path() / "config.json").string() + "'");
    CHECK(result.exit_code == 2);
    CHECK(result.output.find("teeth_large") != std::string::npos);
  }
}

TEST_CASE("cli fit recovers parameters from sweep tables") {
  TempDir dir;

  SUBCASE("measured sweep lands in the plausible window") {
    spit(dir.path() / "measured.csv",
         "r_load_ohm,v_rms,power_w\n"
         "5,0.72,0.10\n6.8,0.85,0.11\n8.2,1.01,0.12\n9.1,1.2,0.16\n"
         "10,1.2,0.14\n14.3,1.35,0.13\n20,1.6,0.13\n");
    spit(dir.path() / "config.json", R"({"paths": {"sweep_csv": "measured.csv"}})");
    const fs::path out = dir.path() / "out";
    const RunResult result = run(dir, "fit --config '" +
                                          (dir.path() / "config.json").string() +
                                          "' --out '" + out.string() + "'");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("measured optimal load: 9.1 ohm") != std::string::npos);
    const auto fit = nlohmann::json::parse(slurp(out / "fit_result.json"));
    const double emf = fit.at("emf_rms_v").get<double>();
    const double rg = fit.at("r_internal_ohm").get<double>();
    CHECK(emf >= 2.4);
    CHECK(emf <= 3.0);
    CHECK(rg >= 11.0);
    CHECK(rg <= 16.0);
    CHECK(fit.at("residual_rms_v").get<double>() > 0.0);
  }

  SUBCASE("noiseless synthetic sweep recovers exactly") {
    std::ostringstream csv;
    csv << "r_load_ohm,v_rms\n";
    for (double r : {2.0, 5.0, 10.0, 20.0, 50.0}) {
      csv.precision(17);
      csv << r << ',' << 3.0 * r / (10.0 + r) << "\n";
    }
    spit(dir.path() / "synthetic.csv", csv.str());
    spit(dir.path() / "config.json", R"({"paths": {"sweep_csv": "synthetic.csv"}})");
    const fs::path out = dir.path() / "out";
    const RunResult result = run(dir, "fit --config '" +
                                          (dir.path() / "config.json").string() +
                                          "' --out '" + out.string() + "'");
    CHECK(result.exit_code == 0);
    const auto fit = nlohmann::json::parse(slurp(out / "fit_result.json"));
    CHECK(std::abs(fit.at("emf_rms_v").get<double>() - 3.0) <= 3e-6);
    CHECK(std::abs(fit.at("r_internal_ohm").get<double>() - 10.0) <= 1e-5);
  }

  SUBCASE("k_g is derived when the bench arm speed and ratio are known") {
    std::ostringstream csv;
    csv << "r_load_ohm,v_rms\n";
    csv.precision(17);
    for (double r : {2.0, 5.0, 10.0, 20.0, 50.0}) {
      csv << r << ',' << 3.0 * r / (10.0 + r) << "\n";
    }
    spit(dir.path() / "synthetic.csv", csv.str());
    // E = 3.0 = k_g * ratio * omega_rms with ratio 26.18, omega 1.2
    spit(dir.path() / "config.json", R"({
  "generator": {"ratio": 26.18},
  "fit": {"omega_arm_rms_rad_s": 1.2},
  "paths": {"sweep_csv": "synthetic.csv"}
})");
    const RunResult result =
        run(dir, "fit --config '" + (dir.path() / "config.json").string() + "'");
    CHECK(result.exit_code == 0);
    const auto pos = result.output.find("derived k_g_v_per_rad_s: ");
    REQUIRE(pos != std::string::npos);
    const double k_g = std::stod(result.output.substr(pos + 25));
    CHECK(std::abs(k_g - 3.0 / (26.18 * 1.2)) <= 1e-6);
  }

  SUBCASE("single-row sweep is underdetermined") {
    spit(dir.path() / "one.csv", "r_load_ohm,v_rms\n9.1,1.2\n");
    spit(dir.path() / "config.json", R"({"paths": {"sweep_csv": "one.csv"}})");
    const RunResult result =
        run(dir, "fit --config '" + (dir.path() / "config.json").string() + "'");
    CHECK(result.exit_code == 2);
    CHECK(result.output.find("distinct") != std::string::npos);
  }
}

namespace {

std::string simulate_config(const std::string& swing, const std::string& simulate_extra) {
  return std::string(R"({
  "generator": {"k_g_v_per_rad_s": 0.1, "r_internal_ohm": 12.667, "ratio": 26.18},
  "swing": )") +
         swing + R"(,
  "capacitor": {"capacitance_f": 25, "rated_voltage_v": 5.4, "initial_voltage_v": 0.25},
  "simulate": {"r_load_ohm": 9.1, "grid_ohm": {"min_ohm": 5, "max_ohm": 20, "step_ohm": 0.5})" +
         simulate_extra + R"(}
})";
}

}  // namespace

TEST_CASE("cli simulate reproduces the charge endpoint and emits all artifacts") {
  TempDir dir;
  spit(dir.path() / "config.json",
       std::string(R"({
  "generator": {"k_g_v_per_rad_s": 0.1, "r_internal_ohm": 12.667, "ratio": 26.18},
  "swing": {"angle_min_deg": 65, "angle_max_deg": 90, "cadence_hz": 1, "duration_s": 900, "sample_rate_hz": 100},
  "capacitor": {"capacitance_f": 25, "rated_voltage_v": 5.4},
  "simulate": {"r_load_ohm": 9.1, "grid_ohm": {"min_ohm": 5, "max_ohm": 20, "step_ohm": 0.5}, "charging_power_w": 0.01733}
})"));
  const fs::path out = dir.path() / "out";
  const RunResult result = run(dir, "simulate --config '" +
                                        (dir.path() / "config.json").string() + "' --out '" +
                                        out.string() + "'");
  CHECK(result.exit_code == 0);

  const auto cap = nlohmann::json::parse(slurp(out / "capacitor.json"));
  CHECK(std::abs(cap.at("final_voltage_v").get<double>() - 1.117) <= 1e-3);
  CHECK(cap.at("clamped") == false);

  const auto sweep = nlohmann::json::parse(slurp(out / "sweep.json"));
  const auto& records = sweep.at("records");
  REQUIRE(records.size() == 31);
  // unimodal power column with the argmax within one step of R_internal
  const double argmax = sweep.at("argmax").at("r_load_ohm").get<double>();
  CHECK(std::abs(argmax - 12.667) <= 0.5 + 1e-9);
  int direction_changes = 0;
  bool rising = true;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const double prev = records[i - 1].at("p_out_mean_w").get<double>();
    const double cur = records[i].at("p_out_mean_w").get<double>();
    if (rising && cur < prev) {
      rising = false;
      ++direction_changes;
    } else if (!rising && cur > prev) {
      ++direction_changes;
    }
  }
  CHECK(direction_changes <= 1);

  const std::string trace = slurp(out / "chain_trace.csv");
  CHECK(trace.find("t,theta_rad,omega_arm,omega_gen,v,i,p_out,p_internal") !=
        std::string::npos);
  CHECK(slurp(out / "sweep.csv").find("r_load_ohm,v_rms,p_out_mean_w") !=
        std::string::npos);
}

TEST_CASE("cli simulate with a near-zero swing leaves the capacitor at V0") {
  TempDir dir;
  spit(dir.path() / "config.json",
       simulate_config(R"({"angle_min_deg": 65, "angle_max_deg": 65.000000001,
                           "cadence_hz": 1, "duration_s": 30, "sample_rate_hz": 100})",
                       ""));
  const fs::path out = dir.path() / "out";
  const RunResult result = run(dir, "simulate --config '" +
                                        (dir.path() / "config.json").string() + "' --out '" +
                                        out.string() + "'");
  CHECK(result.exit_code == 0);
  const auto cap = nlohmann::json::parse(slurp(out / "capacitor.json"));
  CHECK(std::abs(cap.at("final_voltage_v").get<double>() - 0.25) <= 1e-9);

  // the trace is numerically all-but-zero
  const auto trace_json = nlohmann::json::parse(slurp(out / "sweep.json"));
  for (const auto& rec : trace_json.at("records")) {
    CHECK(rec.at("p_out_mean_w").get<double>() <= 1e-15);
  }
}

TEST_CASE("cli sweep emits only the sweep artifacts") {
  TempDir dir;
  spit(dir.path() / "config.json",
       simulate_config(R"({"angle_min_deg": 45, "angle_max_deg": 90,
                           "cadence_hz": 1, "duration_s": 10, "sample_rate_hz": 100})",
                       ""));
  const fs::path out = dir.path() / "out";
  const RunResult result = run(dir, "sweep --config '" +
                                        (dir.path() / "config.json").string() + "' --out '" +
                                        out.string() + "'");
  CHECK(result.exit_code == 0);
  CHECK(fs::exists(out / "sweep.csv"));
  CHECK(fs::exists(out / "sweep.json"));
  CHECK(!fs::exists(out / "chain_trace.csv"));
  CHECK(!fs::exists(out / "capacitor.json"));
}

TEST_CASE("cli simulate output is byte-identical across runs") {
  TempDir dir;
  spit(dir.path() / "config.json",
       simulate_config(R"({"angle_min_deg": 65, "angle_max_deg": 90,
                           "cadence_hz": 1, "duration_s": 20, "sample_rate_hz": 100})",
                       ", \"charging_power_w\": 0.01733"));
  const fs::path out1 = dir.path() / "out1";
  const fs::path out2 = dir.path() / "out2";
  const std::string config = (dir.path() / "config.json").string();
  CHECK(run(dir, "simulate --config '" + config + "' --out '" + out1.string() + "'")
            .exit_code == 0);
  CHECK(run(dir, "simulate --config '" + config + "' --out '" + out2.string() + "'")
            .exit_code == 0);
  for (const char* name : {"chain_trace.csv", "sweep.csv", "sweep.json", "capacitor.json"}) {
    CHECK(slurp(out1 / name) == slurp(out2 / name));
  }
}
