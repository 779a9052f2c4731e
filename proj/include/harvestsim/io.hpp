#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "harvestsim/electromech.hpp"
#include "harvestsim/geartrain.hpp"
#include "harvestsim/kinematics.hpp"
#include "harvestsim/simulate.hpp"

namespace harvestsim {

// All CSV emitters start with a `# harvestsim <version>` comment line; all
// parsers skip blank lines and lines starting with '#'. Numbers are written
// in the shortest form that round-trips, so emitted files parse back without
// loss. Emitted bytes are deterministic for identical inputs.

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

/// Landmark CSV: header `t,<name>_x,<name>_y[,<name>_v]` repeated per
/// landmark, one row per frame. A `<name>_z` column is accepted and ignored.
/// Parse errors name `source_name` and the 1-based line number.
LandmarkSeries parse_landmark_series(std::istream& in,
                                     const std::string& source_name = "<stream>");

/// Sweep-table CSV: header `r_load_ohm,v_rms[,power_w]`. The power column is
/// computed as v_rms^2 / r_load_ohm when absent. `p_out_mean_w` is accepted
/// as an alias for `power_w` so emitted prediction sweeps parse back.
std::vector<LoadSweepRecord> parse_sweep_csv(std::istream& in,
                                             const std::string& source_name = "<stream>");

/// Columns `r_load_ohm,v_rms,<power_column>`.
void write_sweep_csv(std::ostream& out, const std::vector<LoadSweepRecord>& records,
                     const std::string& power_column = "power_w");

/// Columns `t,theta_rad,omega_arm,omega_gen,v,i,p_out,p_internal`.
void write_trace_csv(std::ostream& out, const ChainTrace& trace);
std::vector<ChainSample> parse_trace_csv(std::istream& in,
                                         const std::string& source_name = "<stream>");

/// Columns `joint,gait,speed_kmh,rms_rad_s`.
void write_comparison_csv(std::ostream& out, const ComparisonReport& report);
std::vector<ComparisonRow> parse_comparison_csv(std::istream& in,
                                                const std::string& source_name = "<stream>");

// JSON reports. Serialized with a `harvestsim_version` field; key order is
// fixed and emission is deterministic.
std::string comparison_report_json(const ComparisonReport& report);
std::string fit_result_json(const FitResult& fit);
FitResult parse_fit_result_json(const std::string& text);
std::string sweep_result_json(const SweepResult& sweep);
std::string capacitor_result_json(const CapacitorResult& result);
std::string geartrain_report_json(const GearTrain& train, const ValidationReport& report);

}  // namespace harvestsim
