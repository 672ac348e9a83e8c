#include "hybridloc/ekf.hpp"

#include <cmath>
#include <numbers>

#include "hybridloc/errors.hpp"

namespace hybridloc {

namespace {

constexpr double kLn10 = std::numbers::ln10;

Eigen::Matrix4d transition_matrix(double dt) {
  Eigen::Matrix4d f = Eigen::Matrix4d::Identity();
  f(0, 2) = dt;
  f(1, 3) = dt;
  return f;
}

// Discretized continuous white-noise-acceleration covariance, per axis
// [[dt^3/3, dt^2/2], [dt^2/2, dt]] scaled by the acceleration PSD.
Eigen::Matrix4d process_covariance(double dt, double accel_psd) {
  const double dt2 = dt * dt;
  const double dt3 = dt2 * dt;
  Eigen::Matrix4d q = Eigen::Matrix4d::Zero();
  q(0, 0) = q(1, 1) = accel_psd * dt3 / 3.0;
  q(2, 2) = q(3, 3) = accel_psd * dt;
  q(0, 2) = q(2, 0) = accel_psd * dt2 / 2.0;
  q(1, 3) = q(3, 1) = accel_psd * dt2 / 2.0;
  return q;
}

}  // namespace

StateEstimate make_initial_state(std::span<const Anchor> anchors, double timestamp,
                                 double position_var, double velocity_var) {
  if (anchors.empty()) {
    throw config_error("cannot initialize tracker without anchors");
  }
  Point2 centroid{0.0, 0.0};
  for (const auto& a : anchors) {
    centroid = centroid + a.position;
  }
  const double inv = 1.0 / static_cast<double>(anchors.size());
  return make_initial_state(Point2{centroid.x * inv, centroid.y * inv}, timestamp,
                            position_var, velocity_var);
}

StateEstimate make_initial_state(const Point2& position, double timestamp,
                                 double position_var, double velocity_var) {
  StateEstimate s;
  s.state << position.x, position.y, 0.0, 0.0;
  s.covariance = Eigen::Vector4d(position_var, position_var, velocity_var, velocity_var)
                     .asDiagonal();
  s.timestamp = timestamp;
  return s;
}

StateEstimate predict(const StateEstimate& s, double dt, const ProcessNoise& q) {
  if (dt < 0.0) {
    throw order_error("predict called with negative dt; measurements must be time-sorted");
  }
  const Eigen::Matrix4d f = transition_matrix(dt);
  StateEstimate out;
  out.state = f * s.state;
  out.covariance = f * s.covariance * f.transpose() + process_covariance(dt, q.accel_psd);
  out.timestamp = s.timestamp + dt;
  return out;
}

double rss_model(const Point2& pos, const Anchor& anchor) {
  const double d = std::max(distance(pos, anchor.position), kMinAnchorDistance);
  return anchor.tx_ref_power_dbm - 10.0 * anchor.path_loss_exponent * std::log10(d);
}

Eigen::RowVector2d rss_position_jacobian(const Point2& pos, const Anchor& anchor) {
  const Point2 offset = pos - anchor.position;
  const double d = norm(offset);
  if (d == 0.0) {
    return Eigen::RowVector2d::Zero();
  }
  // -10 n / (ln10 d^2) * offset, with one factor of d clamped so the
  // magnitude stays bounded inside the clamp radius.
  const double d_eff = std::max(d, kMinAnchorDistance);
  const double scale = -10.0 * anchor.path_loss_exponent / (kLn10 * d * d_eff);
  return {scale * offset.x, scale * offset.y};
}

StateEstimate update(const StateEstimate& s, std::span<const Measurement> batch,
                     std::span<const Anchor> anchors) {
  if (batch.empty()) {
    return s;
  }
  const auto k = static_cast<Eigen::Index>(batch.size());
  Eigen::VectorXd innovation(k);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k, 4);
  Eigen::VectorXd noise_var(k);
  const Point2 predicted_pos{s.state(0), s.state(1)};
  for (Eigen::Index i = 0; i < k; ++i) {
    const Measurement& m = batch[static_cast<size_t>(i)];
    if (m.kind != MeasurementKind::kRss) {
      throw data_error("update expects RSS measurements, got a range from '" +
                       m.source_id + "'");
    }
    const Anchor* anchor = find_anchor(anchors, m.source_id);
    if (anchor == nullptr) {
      throw data_error("unknown source_id '" + m.source_id + "'");
    }
    innovation(i) = m.value - rss_model(predicted_pos, *anchor);
    h.block<1, 2>(i, 0) = rss_position_jacobian(predicted_pos, *anchor);
    noise_var(i) = anchor->rss_noise_stddev_db * anchor->rss_noise_stddev_db;
  }

  const Eigen::MatrixXd r = noise_var.asDiagonal();
  const Eigen::MatrixXd innovation_cov = h * s.covariance * h.transpose() + r;
  const Eigen::MatrixXd gain =
      innovation_cov.ldlt().solve(h * s.covariance).transpose();

  StateEstimate out;
  out.timestamp = s.timestamp;
  out.state = s.state + gain * innovation;
  // Joseph form keeps the covariance PSD under roundoff.
  const Eigen::Matrix4d ikh = Eigen::Matrix4d::Identity() - gain * h;
  out.covariance = ikh * s.covariance * ikh.transpose() + gain * r * gain.transpose();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  return out;
}

PositionEstimate ble_estimate(const StateEstimate& s) {
  return {{s.state(0), s.state(1)}, s.covariance(0, 0), s.covariance(1, 1)};
}

const Anchor* find_anchor(std::span<const Anchor> anchors, const std::string& id) {
  for (const auto& a : anchors) {
    if (a.id == id) {
      return &a;
    }
  }
  return nullptr;
}

}  // namespace hybridloc
