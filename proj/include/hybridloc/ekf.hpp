#ifndef HYBRIDLOC_EKF_HPP_
#define HYBRIDLOC_EKF_HPP_

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "hybridloc/measurement.hpp"

namespace hybridloc {

/// Fixed radio node with known position and a log-distance signal model.
struct Anchor {
  std::string id;
  Point2 position;
  double tx_ref_power_dbm = -55.0;   // received power at the 1 m reference distance
  double path_loss_exponent = 2.0;
  double rss_noise_stddev_db = 3.0;  // i.i.d. Gaussian shadowing, dB

  friend bool operator==(const Anchor&, const Anchor&) = default;
};

/// White-noise acceleration intensity of the constant-velocity motion model.
struct ProcessNoise {
  double accel_psd = 0.5;  // (m/s^2)^2 per Hz

  friend bool operator==(const ProcessNoise&, const ProcessNoise&) = default;
};

/// Tracker state: [x, y, vx, vy] with full 4x4 covariance.
struct StateEstimate {
  Eigen::Vector4d state = Eigen::Vector4d::Zero();
  Eigen::Matrix4d covariance = Eigen::Matrix4d::Identity();
  double timestamp = 0.0;

  Point2 position() const { return {state(0), state(1)}; }
};

/// Distances below this are clamped in the signal model and its Jacobian so
/// gradients stay bounded next to an anchor.
inline constexpr double kMinAnchorDistance = 0.1;

/// Wide prior used when no explicit initialization is configured: mean at the
/// centroid of the anchors with zero velocity.
StateEstimate make_initial_state(std::span<const Anchor> anchors, double timestamp,
                                 double position_var = 25.0, double velocity_var = 1.0);
StateEstimate make_initial_state(const Point2& position, double timestamp,
                                 double position_var = 25.0, double velocity_var = 1.0);

/// Constant-velocity time update over dt seconds. Covariance is propagated as
/// F P F^T + Q(dt) with the continuous white-noise-acceleration Q, which
/// composes exactly over consecutive intervals.
StateEstimate predict(const StateEstimate& s, double dt, const ProcessNoise& q);

/// Log-distance received power at pos: tx_ref_power - 10 n log10(d / 1 m),
/// with d clamped below at kMinAnchorDistance.
double rss_model(const Point2& pos, const Anchor& anchor);

/// d(rss)/d(x, y) of rss_model at pos. Magnitude is clamped consistently with
/// rss_model inside kMinAnchorDistance; zero exactly at the anchor.
Eigen::RowVector2d rss_position_jacobian(const Point2& pos, const Anchor& anchor);

/// EKF measurement update with one batch of RSS samples sharing a tick.
/// Unknown source ids raise a data error; an empty batch returns s unchanged.
/// Joseph-form covariance update plus symmetrization keeps P positive
/// semi-definite.
StateEstimate update(const StateEstimate& s, std::span<const Measurement> batch,
                     std::span<const Anchor> anchors);

/// Project the tracker state to a fusible position estimate: mean (x, y) and
/// the two position diagonal entries of the covariance.
PositionEstimate ble_estimate(const StateEstimate& s);

const Anchor* find_anchor(std::span<const Anchor> anchors, const std::string& id);

}  // namespace hybridloc

#endif  // HYBRIDLOC_EKF_HPP_
