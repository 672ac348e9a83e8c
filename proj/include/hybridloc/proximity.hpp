#ifndef HYBRIDLOC_PROXIMITY_HPP_
#define HYBRIDLOC_PROXIMITY_HPP_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hybridloc/measurement.hpp"

namespace hybridloc {

/// One calibration point of the ranging bias table.
struct BiasPoint {
  double distance = 0.0;  // meters, measured distance
  double bias = 0.0;      // meters, measured minus true

  friend bool operator==(const BiasPoint&, const BiasPoint&) = default;
};

/// Ranging stddev never reported below this; keeps inverse-variance weights
/// bounded where the fitted cubic dips toward zero.
inline constexpr double kStddevFloor = 0.005;  // m

/// Corrected ranges are clamped to at least this.
inline constexpr double kMinCorrectedRange = 0.001;  // m

/// Time-of-flight ranger: pose, detection cone, range limit and the two
/// calibration models (bias table, stddev cubic).
struct SensorModel {
  std::string id;
  Point2 position;
  Point2 boresight = {1.0, 0.0};      // unit vector
  double fov_half_angle = 0.0;        // radians, declared cone
  double measured_fov_half_angle = 0.0;  // radians, cone observed on a real target
  double max_range = 3.5;             // meters
  std::vector<BiasPoint> bias_curve;  // distances strictly increasing
  std::array<double, 4> stddev_cubic = {kStddevFloor, 0.0, 0.0, 0.0};  // c0..c3

  friend bool operator==(const SensorModel&, const SensorModel&) = default;
};

/// Piecewise-linear interpolation of the bias table at the given measured
/// distance; flat extrapolation beyond both table ends; 0 for an empty table.
double interpolate_bias(std::span<const BiasPoint> curve, double measured_distance);

/// Subtract the interpolated bias from a raw range. The table is keyed on the
/// measured distance because that is all the corrector observes. Result is
/// clamped to stay positive; non-positive input raises a data error.
double correct_bias(const SensorModel& m, double raw_range);

/// Evaluate the stddev cubic at distance d (meters), clamped below at
/// kStddevFloor. d outside (0, max_range] raises a range error.
double stddev_at(const SensorModel& m, double d);

struct CalibrationSample {
  double distance = 0.0;  // m
  double stddev = 0.0;    // m
};

struct CubicFit {
  std::array<double, 4> coefficients = {0, 0, 0, 0};   // c0..c3
  double residual_rms = 0.0;
  std::array<double, 4> standard_errors = {0, 0, 0, 0};
};

/// Ordinary least-squares cubic through (distance, stddev) samples. Needs at
/// least four distinct distances, otherwise raises a fit error.
CubicFit fit_stddev_cubic(std::span<const CalibrationSample> samples);

/// Point estimate for one range return: bias-corrected distance along the
/// boresight, isotropic variance stddev_at(d)^2. Returns nothing when the
/// corrected distance falls outside (0, max_range] -- a valid no-detection,
/// not a failure.
std::optional<PositionEstimate> sensor_estimate(const SensorModel& m, double raw_range);

/// Inverse-variance weighted average of several position estimates, applied
/// per axis; the combined variance is the harmonic combination of the input
/// variances. Empty input raises a data error; a single estimate passes
/// through unchanged.
PositionEstimate combine_sensor_estimates(std::span<const PositionEstimate> estimates);

/// Calibration shipped with the project: bias table and stddev-cubic anchor
/// points for the default ranger model. The cubic coefficients come from
/// fit_stddev_cubic over default_stddev_samples() (exact interpolation: four
/// points, four coefficients).
std::vector<BiasPoint> default_bias_table();
std::vector<CalibrationSample> default_stddev_samples();
std::array<double, 4> default_stddev_cubic();

/// 27 degree declared cone and the narrower cone observed on a person-sized
/// target, as half-angles in radians.
double default_declared_half_angle();
double default_measured_half_angle();

/// Ranger with the default calibration at the given pose.
SensorModel make_default_sensor(std::string id, const Point2& position, const Point2& boresight);

}  // namespace hybridloc

#endif  // HYBRIDLOC_PROXIMITY_HPP_
