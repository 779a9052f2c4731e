#include "harvestsim/simulate.hpp"

#include <cmath>
#include <numbers>

namespace harvestsim {

namespace {

constexpr double kRatioMismatchRelTol = 1e-9;
constexpr double kDegToRad = std::numbers::pi / 180.0;

double trapezoid(const std::vector<ChainSample>& samples, double ChainSample::* field) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    sum += 0.5 * (samples[i].*field + samples[i + 1].*field) *
           (samples[i + 1].t - samples[i].t);
  }
  return sum;
}

}  // namespace

void validate_profile(const SwingProfile& profile) {
  if (!(profile.angle_min_deg < profile.angle_max_deg)) {
    throw ConfigError("swing: angle_min_deg must be < angle_max_deg");
  }
  if (!(profile.cadence_hz > 0.0)) {
    throw ConfigError("swing: cadence_hz must be > 0");
  }
  if (!(profile.duration_s > 0.0)) {
    throw ConfigError("swing: duration_s must be > 0");
  }
  if (!(profile.sample_rate_hz >= 20.0 * profile.cadence_hz)) {
    throw ConfigError("swing: sample_rate_hz must be >= 20 x cadence_hz");
  }
}

void validate_capacitor(const CapacitorSpec& cap) {
  if (!(cap.capacitance_f > 0.0)) {
    throw ConfigError("capacitor: capacitance_f must be > 0");
  }
  if (cap.initial_voltage_v < 0.0 || cap.initial_voltage_v > cap.rated_voltage_v) {
    throw ConfigError("capacitor: initial_voltage_v must lie in [0, rated_voltage_v]");
  }
}

AngleSeries synth_swing(const SwingProfile& profile, const std::string& joint_name) {
  validate_profile(profile);
  const double mid = 0.5 * (profile.angle_min_deg + profile.angle_max_deg) * kDegToRad;
  const double amplitude = 0.5 * (profile.angle_max_deg - profile.angle_min_deg) * kDegToRad;
  const double two_pi_f = 2.0 * std::numbers::pi * profile.cadence_hz;

  const auto count = static_cast<std::size_t>(
      std::floor(profile.duration_s * profile.sample_rate_hz + 1e-9)) + 1;
  AngleSeries series;
  series.joint = joint_name;
  series.samples.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) / profile.sample_rate_hz;
    series.samples[k] = {t, mid + amplitude * std::sin(two_pi_f * t)};
  }
  return series;
}

ChainTrace simulate_chain(const AngleSeries& angles, double ratio,
                          const GeneratorParams& params, double r_load_ohm) {
  if (std::abs(ratio - params.ratio) >
      kRatioMismatchRelTol * std::max(1.0, std::abs(params.ratio))) {
    throw ConfigError("simulate_chain: ratio argument disagrees with params.ratio");
  }
  if (r_load_ohm < 0.0) {
    throw ConfigError("simulate_chain: r_load_ohm must be >= 0");
  }
  const double total_r = params.r_internal_ohm + r_load_ohm;
  if (total_r == 0.0) {
    throw SingularCircuitError("simulate_chain: zero total circuit resistance");
  }

  const OmegaSeries omega = angular_velocity(angles, 1);

  ChainTrace trace;
  trace.samples.resize(omega.samples.size());
  for (std::size_t k = 0; k < omega.samples.size(); ++k) {
    ChainSample& s = trace.samples[k];
    s.t = omega.samples[k].t;
    s.theta = angles.samples[k].theta;
    s.omega_arm = omega.samples[k].omega;
    s.omega_gen = s.omega_arm * params.ratio;
    s.v = params.k_g * s.omega_gen;
    s.i = s.v / total_r;
    s.p_out = s.i * s.i * r_load_ohm;
    s.p_internal = s.i * s.i * params.r_internal_ohm;
  }
  trace.energy_out_j = trapezoid(trace.samples, &ChainSample::p_out);
  const double internal_j = trapezoid(trace.samples, &ChainSample::p_internal);
  trace.energy_total_j = trace.energy_out_j + internal_j;
  return trace;
}

SweepResult sweep_load(const AngleSeries& angles, double ratio,
                       const GeneratorParams& params, const std::vector<double>& grid_ohm) {
  if (grid_ohm.empty()) {
    throw ConfigError("sweep_load: empty resistance grid");
  }
  for (double r : grid_ohm) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw ConfigError("sweep_load: grid resistances must be > 0");
    }
  }

  SweepResult result;
  result.records.reserve(grid_ohm.size());
  for (std::size_t g = 0; g < grid_ohm.size(); ++g) {
    const ChainTrace trace = simulate_chain(angles, ratio, params, grid_ohm[g]);
    double sum_v_sq = 0.0;
    double sum_p = 0.0;
    for (const ChainSample& s : trace.samples) {
      const double v_load = s.i * grid_ohm[g];
      sum_v_sq += v_load * v_load;
      sum_p += s.p_out;
    }
    const auto n = static_cast<double>(trace.samples.size());
    LoadSweepRecord record;
    record.r_load_ohm = grid_ohm[g];
    record.v_rms = std::sqrt(sum_v_sq / n);
    record.power_w = sum_p / n;
    result.records.push_back(record);

    const LoadSweepRecord& best = result.records[result.argmax_index];
    if (record.power_w > best.power_w ||
        (record.power_w == best.power_w && record.r_load_ohm < best.r_load_ohm)) {
      result.argmax_index = g;
    }
  }
  return result;
}

CapacitorResult simulate_capacitor(double source_power_w, const CapacitorSpec& cap,
                                   double duration_s) {
  validate_capacitor(cap);
  if (source_power_w < 0.0 || !std::isfinite(source_power_w)) {
    throw ConfigError("simulate_capacitor: source_power_w must be >= 0");
  }
  if (duration_s < 0.0) {
    throw ConfigError("simulate_capacitor: duration_s must be >= 0");
  }
  const double v0 = cap.initial_voltage_v;
  double v_final = std::sqrt(v0 * v0 + 2.0 * source_power_w * duration_s / cap.capacitance_f);
  CapacitorResult result;
  result.clamped = v_final > cap.rated_voltage_v;
  if (result.clamped) v_final = cap.rated_voltage_v;
  result.final_voltage_v = v_final;
  result.stored_energy_j = 0.5 * cap.capacitance_f * v_final * v_final;
  return result;
}

double capacitor_energy(const CapacitorSpec& cap, double voltage) {
  validate_capacitor(cap);
  if (voltage < 0.0) {
    throw ConfigError("capacitor_energy: voltage must be >= 0");
  }
  if (voltage > cap.rated_voltage_v) {
    throw OverVoltageError("capacitor_energy: voltage above the rated maximum");
  }
  return 0.5 * cap.capacitance_f * voltage * voltage;
}

}  // namespace harvestsim
