#pragma once

#include <vector>

#include "harvestsim/errors.hpp"

namespace harvestsim {

/// Generator circuit parameters. All steady-state quantities through this
/// module are RMS: an angular speed of x rad/s RMS produces an EMF of
/// k_g * ratio * x volts RMS.
struct GeneratorParams {
  /// Motor constant: open-circuit EMF per unit shaft speed, V.s/rad.
  double k_g = 0.0;

  /// Winding resistance, ohms.
  double r_internal_ohm = 0.0;

  /// Assembled gear-train speed multiplication (arm shaft to generator shaft).
  double ratio = 1.0;
};

/// One row of a load sweep: measured or predicted.
struct LoadSweepRecord {
  double r_load_ohm = 0.0;
  double v_rms = 0.0;    // RMS voltage across the load
  double power_w = 0.0;  // load power, v_rms^2 / r_load_ohm
};

/// Result of fitting (E, R_g) to a load sweep with the voltage-divider model
/// v = E * R / (R_g + R).
struct FitResult {
  double emf_rms = 0.0;         // open-circuit RMS EMF, volts
  double r_internal_ohm = 0.0;  // fitted internal resistance, ohms
  double residual_rms = 0.0;    // RMS of the fit residuals, volts
};

struct PowerSplit {
  double p_out = 0.0;       // I^2 * R_load
  double p_internal = 0.0;  // I^2 * R_internal
  double p_total = 0.0;     // p_out + p_internal
};

struct OptimalLoad {
  double analytic_ohm = 0.0;  // maximum power transfer: R_load = R_internal
  double grid_ohm = 0.0;      // argmax of predicted load power over the grid
};

/// Generator shaft speed: omega_arm * ratio, sign-preserving. ratio must be
/// positive.
double output_speed(double omega_arm, double ratio);

/// Open-circuit EMF: k_g * ratio * omega_arm.
double emf(const GeneratorParams& params, double omega_arm);

/// Series-circuit current: emf / (r_internal + r_load). Throws
/// SingularCircuitError when both resistances are zero.
double load_current(const GeneratorParams& params, double omega_arm, double r_load_ohm);

/// Splits the dissipation of `current` across the load and the winding.
PowerSplit power_split(double current, double r_internal_ohm, double r_load_ohm);

/// Load power from the measured RMS load voltage: v^2 / r. Throws
/// SingularCircuitError when r_load_ohm is zero (negative throws
/// ConfigError).
double power_from_vrms(double v_rms, double r_load_ohm);

/// p_out / p_total, in [0, 1]. Under the circuit model this equals
/// r_load / (r_internal + r_load). Throws UndefinedEfficiencyError when
/// p_total is zero and ConfigError when p_out exceeds p_total.
double efficiency(double p_out, double p_total);

/// Least-squares fit of (E, R_g) minimizing
///   sum_i (v_i - E * R_i / (R_g + R_i))^2.
/// Deterministic two-stage solver: a 200x200 logarithmic grid over
/// [0.01, 100]^2 seeds a damped Gauss-Newton refinement (at most 100
/// iterations, converged when the relative parameter change drops below
/// 1e-10). R_g is constrained to be non-negative. Throws
/// UnderdeterminedFitError with fewer than 2 distinct loads and
/// FitFailureError (with diagnostics) when the refinement does not converge.
FitResult fit_sweep(const std::vector<LoadSweepRecord>& records);

/// Optimal load for a fixed-EMF source with internal resistance
/// `r_internal_ohm`: the analytic optimum is r_internal_ohm itself; the grid
/// optimum is the argmax of predicted load power over `grid_ohm`, ties broken
/// toward the smaller resistance. The grid must be non-empty and positive.
OptimalLoad optimal_load(double r_internal_ohm, const std::vector<double>& grid_ohm);
OptimalLoad optimal_load(const GeneratorParams& params, const std::vector<double>& grid_ohm);
OptimalLoad optimal_load(const FitResult& fit, const std::vector<double>& grid_ohm);

/// Measured-table mode: the load resistance of the record with the highest
/// power column, ties broken toward the smaller resistance.
double optimal_measured_load(const std::vector<LoadSweepRecord>& records);

}  // namespace harvestsim
