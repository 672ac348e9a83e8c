#include "hybridloc/proximity.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "hybridloc/errors.hpp"

namespace hybridloc {

double interpolate_bias(std::span<const BiasPoint> curve, double measured_distance) {
  if (curve.empty()) {
    return 0.0;
  }
  if (measured_distance <= curve.front().distance) {
    return curve.front().bias;
  }
  if (measured_distance >= curve.back().distance) {
    return curve.back().bias;
  }
  for (size_t i = 1; i < curve.size(); ++i) {
    if (measured_distance <= curve[i].distance) {
      const auto& lo = curve[i - 1];
      const auto& hi = curve[i];
      const double t = (measured_distance - lo.distance) / (hi.distance - lo.distance);
      return lo.bias + t * (hi.bias - lo.bias);
    }
  }
  return curve.back().bias;
}

double correct_bias(const SensorModel& m, double raw_range) {
  if (!(raw_range > 0.0)) {
    throw data_error("range must be positive, got " + std::to_string(raw_range));
  }
  const double corrected = raw_range - interpolate_bias(m.bias_curve, raw_range);
  return std::max(corrected, kMinCorrectedRange);
}

double stddev_at(const SensorModel& m, double d) {
  if (!(d > 0.0) || d > m.max_range) {
    throw range_error("distance " + std::to_string(d) + " outside (0, " +
                      std::to_string(m.max_range) + "] for sensor '" + m.id + "'");
  }
  const auto& c = m.stddev_cubic;
  const double value = c[0] + d * (c[1] + d * (c[2] + d * c[3]));
  return std::max(value, kStddevFloor);
}

CubicFit fit_stddev_cubic(std::span<const CalibrationSample> samples) {
  std::set<double> distinct;
  for (const auto& s : samples) {
    distinct.insert(s.distance);
  }
  if (distinct.size() < 4) {
    throw fit_error("cubic fit needs at least 4 distinct distances, got " +
                    std::to_string(distinct.size()));
  }

  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd design(n, 4);
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = samples[static_cast<size_t>(i)].distance;
    design(i, 0) = 1.0;
    design(i, 1) = d;
    design(i, 2) = d * d;
    design(i, 3) = d * d * d;
    target(i) = samples[static_cast<size_t>(i)].stddev;
  }

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 4) {
    throw fit_error("cubic fit design matrix is rank deficient");
  }
  const Eigen::Vector4d coeffs = qr.solve(target);

  const Eigen::VectorXd residuals = target - design * coeffs;
  const double ss_res = residuals.squaredNorm();

  CubicFit fit;
  for (int j = 0; j < 4; ++j) {
    fit.coefficients[static_cast<size_t>(j)] = coeffs(j);
  }
  fit.residual_rms = std::sqrt(ss_res / static_cast<double>(n));

  // Coefficient standard errors from sigma^2 (X^T X)^-1; zero when the fit
  // is an exact interpolation (n == 4).
  if (n > 4) {
    const double sigma2 = ss_res / static_cast<double>(n - 4);
    const Eigen::Matrix4d xtx_inv = (design.transpose() * design).inverse();
    for (int j = 0; j < 4; ++j) {
      fit.standard_errors[static_cast<size_t>(j)] = std::sqrt(sigma2 * xtx_inv(j, j));
    }
  }
  return fit;
}

std::optional<PositionEstimate> sensor_estimate(const SensorModel& m, double raw_range) {
  const double d = correct_bias(m, raw_range);
  if (d > m.max_range) {
    return std::nullopt;
  }
  const double sigma = stddev_at(m, d);
  PositionEstimate estimate;
  estimate.position = m.position + d * m.boresight;
  estimate.var_x = sigma * sigma;
  estimate.var_y = sigma * sigma;
  return estimate;
}

PositionEstimate combine_sensor_estimates(std::span<const PositionEstimate> estimates) {
  if (estimates.empty()) {
    throw data_error("cannot combine an empty set of estimates");
  }
  if (estimates.size() == 1) {
    return estimates.front();
  }
  double weight_x = 0.0, weight_y = 0.0;
  double sum_x = 0.0, sum_y = 0.0;
  for (const auto& e : estimates) {
    if (!(e.var_x > 0.0) || !(e.var_y > 0.0)) {
      throw data_error("estimate variance must be positive");
    }
    const double wx = 1.0 / e.var_x;
    const double wy = 1.0 / e.var_y;
    weight_x += wx;
    weight_y += wy;
    sum_x += wx * e.position.x;
    sum_y += wy * e.position.y;
  }
  return {{sum_x / weight_x, sum_y / weight_y}, 1.0 / weight_x, 1.0 / weight_y};
}

std::vector<BiasPoint> default_bias_table() {
  return {{0.5, 0.01}, {1.0, 0.02}, {2.0, 0.03}, {3.5, 0.30}};
}

std::vector<CalibrationSample> default_stddev_samples() {
  return {{0.5, 0.02}, {2.0, 0.03}, {2.5, 0.05}, {3.5, 0.20}};
}

std::array<double, 4> default_stddev_cubic() {
  const auto samples = default_stddev_samples();
  return fit_stddev_cubic(samples).coefficients;
}

double default_declared_half_angle() { return 13.5 * std::numbers::pi / 180.0; }

double default_measured_half_angle() { return 6.1 * std::numbers::pi / 180.0; }

SensorModel make_default_sensor(std::string id, const Point2& position,
                                const Point2& boresight) {
  SensorModel m;
  m.id = std::move(id);
  m.position = position;
  const double len = norm(boresight);
  if (!(len > 0.0)) {
    throw config_error("sensor boresight must be nonzero");
  }
  m.boresight = {boresight.x / len, boresight.y / len};
  m.fov_half_angle = default_declared_half_angle();
  m.measured_fov_half_angle = default_measured_half_angle();
  m.max_range = 3.5;
  m.bias_curve = default_bias_table();
  m.stddev_cubic = default_stddev_cubic();
  return m;
}

}  // namespace hybridloc
