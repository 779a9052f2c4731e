#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "harvestsim/electromech.hpp"
#include "harvestsim/errors.hpp"
#include "harvestsim/kinematics.hpp"

namespace harvestsim {

/// Parametric arm-swing description. One full back-and-forth is one period.
struct SwingProfile {
  double angle_min_deg = 0.0;
  double angle_max_deg = 0.0;
  double cadence_hz = 0.0;
  double duration_s = 0.0;
  double sample_rate_hz = 0.0;  // must be >= 20 x cadence_hz
};

struct CapacitorSpec {
  double capacitance_f = 0.0;
  double rated_voltage_v = 0.0;
  double initial_voltage_v = 0.0;
};

struct ChainSample {
  double t = 0.0;
  double theta = 0.0;       // rad
  double omega_arm = 0.0;   // rad/s
  double omega_gen = 0.0;   // rad/s
  double v = 0.0;           // EMF, volts; v = i * (R_g + R_l)
  double i = 0.0;           // amperes
  double p_out = 0.0;       // i^2 * R_l
  double p_internal = 0.0;  // i^2 * R_g
};

/// Full kinematics -> gears -> generator run. Energies are trapezoidal time
/// integrals of p_out and p_out + p_internal over the trace.
struct ChainTrace {
  std::vector<ChainSample> samples;
  double energy_out_j = 0.0;
  double energy_total_j = 0.0;
};

struct SweepResult {
  std::vector<LoadSweepRecord> records;  // grid order
  std::size_t argmax_index = 0;          // by power, ties to smaller resistance
};

struct CapacitorResult {
  double final_voltage_v = 0.0;
  double stored_energy_j = 0.0;
  bool clamped = false;
};

/// Throws ConfigError when the profile violates its invariants.
void validate_profile(const SwingProfile& profile);

/// Throws ConfigError when the spec violates its invariants.
void validate_capacitor(const CapacitorSpec& cap);

/// Sinusoidal drive signal between the profile bounds:
///   theta(t) = mid + A * sin(2 pi cadence t),  mid = (min+max)/2, A = (max-min)/2
/// converted to radians and sampled at sample_rate_hz for duration_s.
AngleSeries synth_swing(const SwingProfile& profile, const std::string& joint_name = "swing");

/// Runs the equation chain per sample: omega_arm by unsmoothed finite
/// differences, omega_gen = omega_arm * ratio, v = k_g * omega_gen,
/// i = v / (R_g + R_l), then the power split. `ratio` must agree with
/// params.ratio (relative mismatch beyond 1e-9 throws ConfigError).
ChainTrace simulate_chain(const AngleSeries& angles, double ratio,
                          const GeneratorParams& params, double r_load_ohm);

/// One simulate_chain per grid point. Each record carries the RMS load
/// voltage and the mean output power over the trace, so
/// power_from_vrms(v_rms, r) reproduces the power column. Output order is
/// the grid order.
SweepResult sweep_load(const AngleSeries& angles, double ratio,
                       const GeneratorParams& params, const std::vector<double>& grid_ohm);

/// Constant-average-power energy balance:
///   1/2 C V_f^2 = 1/2 C V_0^2 + P t
/// clamped at the rated voltage (clamping is flagged, not an error).
CapacitorResult simulate_capacitor(double source_power_w, const CapacitorSpec& cap,
                                   double duration_s);

/// Stored energy 1/2 C V^2. Throws OverVoltageError above the rating.
double capacitor_energy(const CapacitorSpec& cap, double voltage);

}  // namespace harvestsim
