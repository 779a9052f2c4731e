#include "harvestsim/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

namespace harvestsim {

std::size_t LandmarkSeries::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  throw ConfigError("landmark '" + name + "' not present in series");
}

double joint_angle(Point2 a, Point2 b, Point2 c) {
  const double ux = a.x - b.x;
  const double uy = a.y - b.y;
  const double vx = c.x - b.x;
  const double vy = c.y - b.y;
  if (!std::isfinite(ux) || !std::isfinite(uy) || !std::isfinite(vx) || !std::isfinite(vy)) {
    throw DegenerateGeometryError("joint_angle: non-finite coordinates");
  }
  if ((ux == 0.0 && uy == 0.0) || (vx == 0.0 && vy == 0.0)) {
    throw DegenerateGeometryError("joint_angle: coincident points leave a ray undefined");
  }
  // atan2 of |cross| and dot: stable near 0 and pi, result in [0, pi].
  const double cross = ux * vy - uy * vx;
  const double dot = ux * vx + uy * vy;
  return std::atan2(std::abs(cross), dot);
}

AngleSeries angle_series(const LandmarkSeries& series, const JointDefinition& joint,
                         double visibility_threshold) {
  const std::size_t ip = series.index_of(joint.proximal);
  const std::size_t iv = series.index_of(joint.vertex);
  const std::size_t id = series.index_of(joint.distal);

  AngleSeries out;
  out.joint = joint.name;
  out.samples.reserve(series.frames.size());
  for (const LandmarkFrame& frame : series.frames) {
    if (frame.pos.size() != series.names.size()) {
      throw ConfigError("angle_series: frame does not carry every declared landmark");
    }
    if (!frame.vis.empty() && frame.vis.size() != series.names.size()) {
      throw ConfigError("angle_series: frame visibility length mismatch");
    }
    const double vis = frame.vis.empty()
                           ? 1.0
                           : std::min({frame.vis[ip], frame.vis[iv], frame.vis[id]});
    if (vis < visibility_threshold) continue;
    out.samples.push_back(
        {frame.t, joint_angle(frame.pos[ip], frame.pos[iv], frame.pos[id])});
  }
  if (out.samples.size() < 2) {
    throw InsufficientDataError("angle_series: fewer than 2 frames survive the visibility "
                                "threshold for joint '" + joint.name + "'");
  }
  return out;
}

OmegaSeries angular_velocity(const AngleSeries& angles, int smoothing_window) {
  const std::size_t n = angles.samples.size();
  if (n < 2) {
    throw InsufficientDataError("angular_velocity: need at least 2 samples");
  }
  if (smoothing_window < 1 || smoothing_window % 2 == 0) {
    throw ConfigError("smoothing_window must be an odd positive integer");
  }
  if (static_cast<std::size_t>(smoothing_window) > n) {
    throw ConfigError("smoothing_window exceeds the sample count");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(angles.samples[i].t > angles.samples[i - 1].t)) {
      throw ConfigError("angular_velocity: timestamps must be strictly increasing");
    }
  }

  const auto& s = angles.samples;
  std::vector<double> raw(n);
  raw.front() = (s[1].theta - s[0].theta) / (s[1].t - s[0].t);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    raw[i] = (s[i + 1].theta - s[i - 1].theta) / (s[i + 1].t - s[i - 1].t);
  }
  raw.back() = (s[n - 1].theta - s[n - 2].theta) / (s[n - 1].t - s[n - 2].t);

  OmegaSeries out;
  out.joint = angles.joint;
  out.samples.resize(n);
  const std::size_t half = static_cast<std::size_t>(smoothing_window / 2);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + half);
    double sum = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) sum += raw[k];
    out.samples[i] = {s[i].t, sum / static_cast<double>(hi - lo + 1)};
  }
  return out;
}

double rms(const OmegaSeries& omega) {
  if (omega.samples.empty()) {
    throw InsufficientDataError("rms: empty series");
  }
  double sum_sq = 0.0;
  for (const OmegaSample& sample : omega.samples) {
    sum_sq += sample.omega * sample.omega;
  }
  return std::sqrt(sum_sq / static_cast<double>(omega.samples.size()));
}

std::string to_string(Gait gait) {
  return gait == Gait::Walking ? "walking" : "running";
}

Gait gait_from_string(const std::string& text) {
  if (text == "walking") return Gait::Walking;
  if (text == "running") return Gait::Running;
  throw ConfigError("gait must be 'walking' or 'running', got '" + text + "'");
}

namespace {

// Sort key and tie-break order: speed, walking before running, label.
std::tuple<double, int, const std::string&> row_key(const ComparisonRow& row) {
  return {row.speed_kmh, static_cast<int>(row.gait), row.joint};
}

bool better(const ComparisonRow& candidate, const ComparisonRow& incumbent) {
  if (candidate.rms_rad_s != incumbent.rms_rad_s) {
    return candidate.rms_rad_s > incumbent.rms_rad_s;
  }
  return row_key(candidate) < row_key(incumbent);
}

}  // namespace

ComparisonReport joint_comparison_report(const std::vector<ComparisonInput>& inputs) {
  if (inputs.empty()) {
    throw ConfigError("joint_comparison_report: empty input list");
  }

  ComparisonReport report;
  std::set<std::tuple<std::string, int, double>> keys;
  for (const ComparisonInput& input : inputs) {
    const auto key = std::make_tuple(input.label, static_cast<int>(input.gait),
                                     input.speed_kmh);
    if (!keys.insert(key).second) {
      throw DuplicateKeyError("duplicate comparison key (" + input.label + ", " +
                              to_string(input.gait) + ", " +
                              std::to_string(input.speed_kmh) + " km/h)");
    }
    report.rows.push_back({input.label, input.gait, input.speed_kmh, rms(input.omega)});
  }

  std::sort(report.rows.begin(), report.rows.end(),
            [](const ComparisonRow& a, const ComparisonRow& b) {
              return row_key(a) < row_key(b);
            });

  report.best_overall = report.rows.front();
  for (const ComparisonRow& row : report.rows) {
    if (better(row, report.best_overall)) report.best_overall = row;

    auto it = std::find_if(report.best_per_speed.begin(), report.best_per_speed.end(),
                           [&](const ComparisonRow& r) { return r.speed_kmh == row.speed_kmh; });
    if (it == report.best_per_speed.end()) {
      report.best_per_speed.push_back(row);
    } else if (better(row, *it)) {
      *it = row;
    }
  }
  return report;
}

}  // namespace harvestsim
