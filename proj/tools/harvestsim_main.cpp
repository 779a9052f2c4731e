// harvestsim: design and simulation toolkit for joint-mounted
// gear-and-generator biomechanical energy harvesters.
//
// Subcommands: analyze | geartrain | fit | simulate | sweep
// Exit codes: 0 success, 1 computational failure, 2 usage/input error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "harvestsim/config.hpp"
#include "harvestsim/io.hpp"
#include "harvestsim/version.hpp"

namespace fs = std::filesystem;
using namespace harvestsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitComputeError = 1;
constexpr int kExitUsageError = 2;

struct Context {
  ToolkitConfig config;
  fs::path config_dir;
  fs::path out_dir;
};

fs::path resolve_input(const Context& ctx, const std::string& path) {
  fs::path p(path);
  return p.is_absolute() ? p : ctx.config_dir / p;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path.string());
  out << content;
  std::cout << "wrote " << path.string() << "\n";
}

template <typename WriteFn>
void write_csv_file(const fs::path& path, WriteFn&& fn) {
  std::ostringstream buffer;
  fn(buffer);
  write_file(path, buffer.str());
}

int run_analyze(const Context& ctx) {
  if (!ctx.config.kinematics) {
    throw ConfigError("kinematics: block required for analyze");
  }
  const KinematicsConfig& kin = *ctx.config.kinematics;
  if (kin.joints.empty()) {
    throw ConfigError("kinematics.joints: at least one joint definition is required");
  }
  if (kin.inputs.empty()) {
    throw ConfigError("kinematics.inputs: at least one input is required");
  }
  std::map<std::string, const JointDefinition*> joints;
  for (const JointDefinition& joint : kin.joints) joints[joint.name] = &joint;

  std::vector<ComparisonInput> inputs;
  for (const KinematicsInputConfig& input : kin.inputs) {
    const auto it = joints.find(input.joint);
    if (it == joints.end()) {
      throw ConfigError("kinematics.inputs: unknown joint '" + input.joint + "'");
    }
    const fs::path file = resolve_input(ctx, input.file);
    std::ifstream stream(file);
    if (!stream) throw UsageError("file not found: " + file.string());
    const LandmarkSeries series = parse_landmark_series(stream, file.string());
    const AngleSeries angles = angle_series(series, *it->second, kin.visibility_threshold);
    ComparisonInput ci;
    ci.label = input.label;
    ci.speed_kmh = input.speed_kmh;
    ci.gait = input.gait;
    ci.omega = angular_velocity(angles, kin.smoothing_window);
    inputs.push_back(std::move(ci));
  }

  const ComparisonReport report = joint_comparison_report(inputs);
  std::cout << "analyze: " << report.rows.size() << " inputs\n";
  std::cout << "best joint: " << report.best_overall.joint << " ("
            << to_string(report.best_overall.gait) << ", "
            << format_double(report.best_overall.speed_kmh) << " km/h), rms "
            << format_double(report.best_overall.rms_rad_s) << " rad/s\n";
  write_csv_file(ctx.out_dir / "comparison.csv",
                 [&](std::ostream& out) { write_comparison_csv(out, report); });
  write_file(ctx.out_dir / "comparison.json", comparison_report_json(report));
  return kExitOk;
}

int run_geartrain(const Context& ctx) {
  if (!ctx.config.geartrain) {
    throw ConfigError("geartrain: block required for geartrain");
  }
  const GearTrainConfig& cfg = *ctx.config.geartrain;
  const ValidationReport report =
      validate_train(cfg.train, cfg.expected_center_distance_mm, cfg.expected_ratio);

  std::cout << "stages: " << cfg.train.stages.size() << "\n";
  for (std::size_t i = 0; i + 1 < cfg.train.stages.size(); ++i) {
    const GearStage& up = cfg.train.stages[i];
    const GearStage& down = cfg.train.stages[i + 1];
    std::cout << "mesh " << up.id << "->" << down.id << ": ";
    if (up.module_mm == down.module_mm) {
      std::cout << "center distance " << format_double(mesh_center_distance(up, down))
                << " mm\n";
    } else {
      std::cout << "module mismatch\n";
    }
  }
  std::cout << "overall ratio: " << format_double(overall_ratio(cfg.train)) << "\n";
  for (const CheckResult& check : report.checks) {
    std::cout << "  [" << to_string(check.status) << "] " << check.name << ": "
              << check.detail << "\n";
    if (check.status == CheckStatus::Warn) {
      std::cout << "warning: " << check.detail << "\n";
    }
  }
  std::cout << "validation: " << report.checks.size() << " checks, "
            << report.failed_count() << " failed\n";
  write_file(ctx.out_dir / "geartrain_report.json",
             geartrain_report_json(cfg.train, report));
  return report.all_passed() ? kExitOk : kExitComputeError;
}

int run_fit(const Context& ctx) {
  if (!ctx.config.paths.sweep_csv) {
    throw ConfigError("paths.sweep_csv: required for fit");
  }
  const fs::path file = resolve_input(ctx, *ctx.config.paths.sweep_csv);
  std::ifstream stream(file);
  if (!stream) throw UsageError("file not found: " + file.string());
  const std::vector<LoadSweepRecord> records = parse_sweep_csv(stream, file.string());
  const FitResult fit = fit_sweep(records);

  std::cout << "records: " << records.size() << "\n";
  std::cout << "emf_rms_v: " << format_double(fit.emf_rms) << "\n";
  std::cout << "r_internal_ohm: " << format_double(fit.r_internal_ohm) << "\n";
  std::cout << "residual_rms_v: " << format_double(fit.residual_rms) << "\n";
  std::cout << "analytic optimal load: " << format_double(fit.r_internal_ohm) << " ohm\n";
  std::cout << "measured optimal load: " << format_double(optimal_measured_load(records))
            << " ohm\n";
  // k_g is identifiable only when the bench arm speed and a ratio are known
  if (ctx.config.fit.omega_arm_rms_rad_s) {
    if (const auto ratio = ctx.config.resolved_ratio()) {
      const double k_g = fit.emf_rms / (*ratio * *ctx.config.fit.omega_arm_rms_rad_s);
      std::cout << "derived k_g_v_per_rad_s: " << format_double(k_g) << "\n";
    }
  }
  write_file(ctx.out_dir / "fit_result.json", fit_result_json(fit));
  return kExitOk;
}

int run_simulate(const Context& ctx, bool sweep_only) {
  if (!ctx.config.swing) {
    throw ConfigError("swing: block required for simulation");
  }
  const GeneratorParams params = ctx.config.resolved_generator();
  const AngleSeries angles = synth_swing(*ctx.config.swing);
  std::cout << "samples: " << angles.samples.size() << "\n";

  if (ctx.config.simulate.grid_ohm.empty()) {
    throw ConfigError("simulate.grid_ohm: required");
  }
  const SweepResult sweep =
      sweep_load(angles, params.ratio, params, ctx.config.simulate.grid_ohm);
  const LoadSweepRecord& best = sweep.records[sweep.argmax_index];
  std::cout << "sweep argmax: " << format_double(best.r_load_ohm) << " ohm, p_out_mean_w "
            << format_double(best.power_w) << "\n";
  write_csv_file(ctx.out_dir / "sweep.csv", [&](std::ostream& out) {
    write_sweep_csv(out, sweep.records, "p_out_mean_w");
  });
  write_file(ctx.out_dir / "sweep.json", sweep_result_json(sweep));
  if (sweep_only) return kExitOk;

  if (!ctx.config.simulate.r_load_ohm) {
    throw ConfigError("simulate.r_load_ohm: required for simulate");
  }
  if (!ctx.config.capacitor) {
    throw ConfigError("capacitor: block required for simulate");
  }
  const ChainTrace trace =
      simulate_chain(angles, params.ratio, params, *ctx.config.simulate.r_load_ohm);
  std::cout << "energy_out_j: " << format_double(trace.energy_out_j) << "\n";
  std::cout << "energy_total_j: " << format_double(trace.energy_total_j) << "\n";
  write_csv_file(ctx.out_dir / "chain_trace.csv",
                 [&](std::ostream& out) { write_trace_csv(out, trace); });

  double charging_power = 0.0;
  if (ctx.config.simulate.charging_power_w) {
    charging_power = *ctx.config.simulate.charging_power_w;
  } else {
    double sum = 0.0;
    for (const ChainSample& s : trace.samples) sum += s.p_out;
    charging_power = sum / static_cast<double>(trace.samples.size());
  }
  const CapacitorResult cap =
      simulate_capacitor(charging_power, *ctx.config.capacitor,
                         ctx.config.swing->duration_s);
  std::cout << "capacitor final voltage: " << format_double(cap.final_voltage_v)
            << " V (clamped: " << (cap.clamped ? "yes" : "no") << ")\n";
  write_file(ctx.out_dir / "capacitor.json", capacitor_result_json(cap));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"harvestsim " + std::string(kVersion) +
               " — gear-and-generator biomechanical energy harvester toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  app.footer("HARVESTSIM_SEED is reserved and unused: all computation is deterministic.");

  std::string config_path;
  std::string out_dir_flag;

  struct Sub {
    CLI::App* app;
    std::string name;
  };
  std::vector<Sub> subs;
  for (const char* name : {"analyze", "geartrain", "fit", "simulate", "sweep"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "toolkit configuration JSON")->required();
    sub->add_option("--out", out_dir_flag, "output directory (default: paths.out_dir or .)");
    subs.push_back({sub, name});
  }
  subs[0].app->description("rank joints by RMS angular velocity from landmark CSVs");
  subs[1].app->description("gear-train geometry, center distances, overall ratio");
  subs[2].app->description("fit (EMF, R_internal) to a measured load sweep");
  subs[3].app->description("full swing -> chain -> sweep -> capacitor simulation");
  subs[4].app->description("load sweep only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsageError;
  }

  try {
    Context ctx;
    ctx.config = load_config(config_path);
    ctx.config_dir = fs::path(config_path).parent_path();
    std::string out = out_dir_flag;
    if (out.empty()) out = ctx.config.paths.out_dir.value_or(".");
    ctx.out_dir = out;
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);

    for (const Sub& sub : subs) {
      if (!sub.app->parsed()) continue;
      if (sub.name == "analyze") return run_analyze(ctx);
      if (sub.name == "geartrain") return run_geartrain(ctx);
      if (sub.name == "fit") return run_fit(ctx);
      if (sub.name == "simulate") return run_simulate(ctx, false);
      if (sub.name == "sweep") return run_simulate(ctx, true);
    }
    std::cerr << "error: no subcommand\n";
    return kExitUsageError;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsageError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputeError;
  }
}
