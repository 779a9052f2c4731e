#include "harvestsim/electromech.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace harvestsim {

namespace {

void validate_params(const GeneratorParams& params) {
  if (!(params.k_g > 0.0) || !std::isfinite(params.k_g)) {
    throw ConfigError("generator k_g must be > 0");
  }
  if (params.r_internal_ohm < 0.0 || !std::isfinite(params.r_internal_ohm)) {
    throw ConfigError("generator r_internal_ohm must be >= 0");
  }
  if (!(params.ratio > 0.0) || !std::isfinite(params.ratio)) {
    throw ConfigError("generator ratio must be > 0");
  }
}

}  // namespace

double output_speed(double omega_arm, double ratio) {
  if (!(ratio > 0.0)) {
    throw ConfigError("output_speed: ratio must be > 0");
  }
  return omega_arm * ratio;
}

double emf(const GeneratorParams& params, double omega_arm) {
  validate_params(params);
  return params.k_g * params.ratio * omega_arm;
}

double load_current(const GeneratorParams& params, double omega_arm, double r_load_ohm) {
  validate_params(params);
  if (r_load_ohm < 0.0) {
    throw ConfigError("load_current: r_load_ohm must be >= 0");
  }
  const double total = params.r_internal_ohm + r_load_ohm;
  if (total == 0.0) {
    throw SingularCircuitError("load_current: zero total circuit resistance");
  }
  return emf(params, omega_arm) / total;
}

PowerSplit power_split(double current, double r_internal_ohm, double r_load_ohm) {
  if (r_internal_ohm < 0.0 || r_load_ohm < 0.0) {
    throw ConfigError("power_split: resistances must be >= 0");
  }
  PowerSplit split;
  split.p_out = current * current * r_load_ohm;
  split.p_internal = current * current * r_internal_ohm;
  split.p_total = split.p_out + split.p_internal;
  return split;
}

double power_from_vrms(double v_rms, double r_load_ohm) {
  if (r_load_ohm < 0.0) {
    throw ConfigError("power_from_vrms: r_load_ohm must be >= 0");
  }
  if (r_load_ohm == 0.0) {
    throw SingularCircuitError("power_from_vrms: zero load resistance");
  }
  return v_rms * v_rms / r_load_ohm;
}

double efficiency(double p_out, double p_total) {
  if (p_total == 0.0) {
    throw UndefinedEfficiencyError("efficiency: zero total power");
  }
  if (p_total < 0.0 || p_out < 0.0 || p_out > p_total) {
    throw ConfigError("efficiency: requires 0 <= p_out <= p_total");
  }
  return p_out / p_total;
}

namespace {

constexpr int kGridPoints = 200;
constexpr double kGridLo = 0.01;
constexpr double kGridHi = 100.0;
constexpr int kMaxIterations = 100;
constexpr double kConvergedRelStep = 1e-10;
constexpr double kMinEmf = 1e-12;

double sweep_sse(const std::vector<LoadSweepRecord>& records, double e, double rg) {
  double sse = 0.0;
  for (const LoadSweepRecord& rec : records) {
    const double r = rec.v_rms - e * rec.r_load_ohm / (rg + rec.r_load_ohm);
    sse += r * r;
  }
  return sse;
}

}  // namespace

FitResult fit_sweep(const std::vector<LoadSweepRecord>& records) {
  for (const LoadSweepRecord& rec : records) {
    if (!(rec.r_load_ohm > 0.0) || !std::isfinite(rec.r_load_ohm)) {
      throw ConfigError("fit_sweep: r_load_ohm must be > 0");
    }
    if (rec.v_rms < 0.0 || !std::isfinite(rec.v_rms)) {
      throw ConfigError("fit_sweep: v_rms must be >= 0");
    }
  }
  std::vector<double> loads;
  loads.reserve(records.size());
  for (const LoadSweepRecord& rec : records) loads.push_back(rec.r_load_ohm);
  std::sort(loads.begin(), loads.end());
  loads.erase(std::unique(loads.begin(), loads.end()), loads.end());
  if (loads.size() < 2) {
    throw UnderdeterminedFitError("fit_sweep: need at least 2 records with distinct loads");
  }

  // Stage 1: logarithmic grid seed over (E, R_g).
  std::vector<double> grid(kGridPoints);
  const double log_lo = std::log10(kGridLo);
  const double log_hi = std::log10(kGridHi);
  for (int i = 0; i < kGridPoints; ++i) {
    grid[i] = std::pow(10.0, log_lo + (log_hi - log_lo) * i / (kGridPoints - 1));
  }
  double e = grid.front();
  double rg = grid.front();
  double best = std::numeric_limits<double>::infinity();
  for (double ge : grid) {
    for (double grg : grid) {
      const double sse = sweep_sse(records, ge, grg);
      if (sse < best) {
        best = sse;
        e = ge;
        rg = grg;
      }
    }
  }

  // Stage 2: damped Gauss-Newton, R_g kept non-negative.
  double cur = best;
  bool converged = false;
  int iterations = 0;
  for (; iterations < kMaxIterations; ++iterations) {
    double a11 = 0.0, a12 = 0.0, a22 = 0.0, b1 = 0.0, b2 = 0.0;
    for (const LoadSweepRecord& rec : records) {
      const double denom = rg + rec.r_load_ohm;
      const double g = rec.r_load_ohm / denom;
      const double resid = rec.v_rms - e * g;
      const double de = g;
      const double drg = -e * rec.r_load_ohm / (denom * denom);
      a11 += de * de;
      a12 += de * drg;
      a22 += drg * drg;
      b1 += de * resid;
      b2 += drg * resid;
    }
    const double det = a11 * a22 - a12 * a12;
    if (!(std::abs(det) > 0.0) || !std::isfinite(det)) {
      std::ostringstream os;
      os << "fit_sweep: singular normal equations at E=" << e << ", R_g=" << rg
         << " after " << iterations << " iterations";
      throw FitFailureError(os.str());
    }
    const double step_e = (b1 * a22 - b2 * a12) / det;
    const double step_rg = (a11 * b2 - a12 * b1) / det;

    double scale = 1.0;
    double next_e = e, next_rg = rg, next_sse = cur;
    for (int halving = 0; halving < 30; ++halving) {
      next_e = std::max(e + scale * step_e, kMinEmf);
      next_rg = std::max(rg + scale * step_rg, 0.0);
      next_sse = sweep_sse(records, next_e, next_rg);
      if (next_sse <= cur) break;
      scale *= 0.5;
    }
    const double rel = std::max(
        std::abs(next_e - e) / std::max(std::abs(next_e), kMinEmf),
        std::abs(next_rg - rg) / std::max(std::abs(next_rg), kMinEmf));
    e = next_e;
    rg = next_rg;
    cur = std::min(cur, next_sse);
    if (rel < kConvergedRelStep) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream os;
    os << "fit_sweep: no convergence after " << kMaxIterations
       << " iterations (E=" << e << ", R_g=" << rg << ", sse=" << cur << ")";
    throw FitFailureError(os.str());
  }
  if (e <= kMinEmf * 10.0) {
    throw FitFailureError("fit_sweep: degenerate fit, EMF collapsed to zero");
  }
  return {e, rg, std::sqrt(cur / static_cast<double>(records.size()))};
}

OptimalLoad optimal_load(double r_internal_ohm, const std::vector<double>& grid_ohm) {
  if (r_internal_ohm < 0.0 || !std::isfinite(r_internal_ohm)) {
    throw ConfigError("optimal_load: r_internal_ohm must be >= 0");
  }
  if (grid_ohm.empty()) {
    throw ConfigError("optimal_load: empty grid");
  }
  OptimalLoad result;
  result.analytic_ohm = r_internal_ohm;
  double best_power = -1.0;
  for (double r : grid_ohm) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw ConfigError("optimal_load: grid resistances must be > 0");
    }
    const double denom = r_internal_ohm + r;
    const double power = r / (denom * denom);  // load power at unit EMF
    if (power > best_power || (power == best_power && r < result.grid_ohm)) {
      best_power = power;
      result.grid_ohm = r;
    }
  }
  return result;
}

OptimalLoad optimal_load(const GeneratorParams& params, const std::vector<double>& grid_ohm) {
  validate_params(params);
  return optimal_load(params.r_internal_ohm, grid_ohm);
}

OptimalLoad optimal_load(const FitResult& fit, const std::vector<double>& grid_ohm) {
  return optimal_load(fit.r_internal_ohm, grid_ohm);
}

double optimal_measured_load(const std::vector<LoadSweepRecord>& records) {
  if (records.empty()) {
    throw ConfigError("optimal_measured_load: no records");
  }
  const LoadSweepRecord* best = &records.front();
  for (const LoadSweepRecord& rec : records) {
    if (rec.power_w > best->power_w ||
        (rec.power_w == best->power_w && rec.r_load_ohm < best->r_load_ohm)) {
      best = &rec;
    }
  }
  return best->r_load_ohm;
}

}  // namespace harvestsim
