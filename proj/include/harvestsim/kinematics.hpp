#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "harvestsim/errors.hpp"

namespace harvestsim {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// One frame of a landmark recording. `pos` and `vis` are indexed like
/// LandmarkSeries::names; `vis` holds 1.0 for landmarks recorded without a
/// visibility column.
struct LandmarkFrame {
  double t = 0.0;
  std::vector<Point2> pos;
  std::vector<double> vis;
};

/// Timestamped 2-D pose landmark positions, one position per declared name
/// per frame. Timestamps are strictly increasing; positions are finite;
/// visibility values lie in [0, 1].
struct LandmarkSeries {
  /// Nominal mean rate, (n - 1) / (t_last - t_first).
  double sample_rate_hz = 0.0;
  std::vector<std::string> names;
  std::vector<LandmarkFrame> frames;

  /// Index of `name` in `names`; throws ConfigError when absent.
  std::size_t index_of(const std::string& name) const;
};

/// A joint as the interior angle at `vertex` between the rays toward
/// `proximal` and `distal` (e.g. elbow = shoulder / elbow / wrist).
struct JointDefinition {
  std::string name;
  std::string proximal;
  std::string vertex;
  std::string distal;
};

struct AngleSample {
  double t = 0.0;
  double theta = 0.0;  // radians, [0, pi]
};

struct AngleSeries {
  std::string joint;
  std::vector<AngleSample> samples;
};

struct OmegaSample {
  double t = 0.0;
  double omega = 0.0;  // radians/second, signed
};

struct OmegaSeries {
  std::string joint;
  std::vector<OmegaSample> samples;
};

inline constexpr double kDefaultVisibilityThreshold = 0.5;
inline constexpr int kDefaultSmoothingWindow = 5;

/// Interior angle at vertex `b` between the rays b->a and b->c, in [0, pi].
/// Invariant under rotation, translation, and uniform scaling of all three
/// points. Throws DegenerateGeometryError when either ray has zero length or
/// a coordinate is not finite.
double joint_angle(Point2 a, Point2 b, Point2 c);

/// Per-frame joint angles. Frames where any involved landmark has visibility
/// below `visibility_threshold` are dropped, never interpolated. Throws
/// InsufficientDataError when fewer than 2 frames survive.
AngleSeries angle_series(const LandmarkSeries& series, const JointDefinition& joint,
                         double visibility_threshold = kDefaultVisibilityThreshold);

/// Angular velocity by finite differences: central differences on interior
/// points, one-sided at the two ends, followed by a centered moving average
/// of width `smoothing_window` (clipped at the series ends; window 1 means no
/// smoothing). Output timestamps equal input timestamps. The window must be
/// odd, positive, and no larger than the sample count. Exact for a linear
/// ramp at every point, any window.
OmegaSeries angular_velocity(const AngleSeries& angles, int smoothing_window);

/// Root mean square over all samples. Throws InsufficientDataError on an
/// empty series.
double rms(const OmegaSeries& omega);

enum class Gait { Walking, Running };

std::string to_string(Gait gait);
Gait gait_from_string(const std::string& text);

struct ComparisonInput {
  std::string label;
  double speed_kmh = 0.0;
  Gait gait = Gait::Walking;
  OmegaSeries omega;
};

struct ComparisonRow {
  std::string joint;
  Gait gait = Gait::Walking;
  double speed_kmh = 0.0;
  double rms_rad_s = 0.0;
};

/// Cross-joint RMS comparison. `rows` are sorted by (speed, gait, joint);
/// `best_per_speed` holds the argmax row for each distinct speed in
/// ascending speed order; `best_overall` is the global argmax. Ties break
/// toward walking before running, then the lexicographically smaller label.
struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  std::vector<ComparisonRow> best_per_speed;
  ComparisonRow best_overall;
};

/// Throws DuplicateKeyError when two inputs share (label, gait, speed) and
/// ConfigError on an empty input list.
ComparisonReport joint_comparison_report(const std::vector<ComparisonInput>& inputs);

}  // namespace harvestsim
