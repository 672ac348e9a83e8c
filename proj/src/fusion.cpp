#include "hybridloc/fusion.hpp"

#include <algorithm>
#include <array>

#include "hybridloc/errors.hpp"
#include "hybridloc/proximity.hpp"

namespace hybridloc {

PositionEstimate fuse(const PositionEstimate& ble,
                      const std::optional<PositionEstimate>& prox) {
  if (!prox.has_value()) {
    return ble;
  }
  const std::array<PositionEstimate, 2> pair = {ble, *prox};
  return combine_sensor_estimates(pair);
}

std::pair<StateEstimate, HybridOutput> hybrid_step(const StateEstimate& state,
                                                   std::span<const Measurement> tick,
                                                   const Scenario& scenario,
                                                   const HybridOptions& options) {
  if (tick.empty()) {
    throw data_error("hybrid_step needs at least one measurement");
  }
  const double tick_time = tick.front().timestamp;
  for (const auto& m : tick) {
    if (m.timestamp != tick_time) {
      throw order_error("tick measurements must share one timestamp");
    }
  }
  if (tick_time < state.timestamp) {
    throw order_error("tick is older than the tracker state");
  }

  // Phase 1: radio track. Time update, then one batch measurement update.
  StateEstimate predicted =
      predict(state, tick_time - state.timestamp, ProcessNoise{scenario.filter.accel_psd});
  std::vector<Measurement> rss_batch;
  for (const auto& m : tick) {
    if (m.kind == MeasurementKind::kRss) {
      rss_batch.push_back(m);
    }
  }
  StateEstimate updated = update(predicted, rss_batch, scenario.anchors);

  HybridOutput out;
  out.timestamp = tick_time;
  out.ble_only = ble_estimate(updated);

  // Phase 2: per-sensor point estimates for this tick's range returns.
  std::vector<PositionEstimate> sensor_points;
  for (const auto& m : tick) {
    if (m.kind != MeasurementKind::kRange) {
      continue;
    }
    const SensorModel* sensor = find_sensor(scenario.sensors, m.source_id);
    if (sensor == nullptr) {
      throw data_error("unknown source_id '" + m.source_id + "'");
    }
    if (auto estimate = sensor_estimate(*sensor, m.value)) {
      sensor_points.push_back(*estimate);
      out.detecting_sensor_ids.push_back(sensor->id);
    }
  }
  std::sort(out.detecting_sensor_ids.begin(), out.detecting_sensor_ids.end());

  if (!sensor_points.empty()) {
    out.proximity = combine_sensor_estimates(sensor_points);
  }
  out.fused = fuse(out.ble_only, out.proximity);

  if (options.fusion_feedback && out.proximity.has_value()) {
    // Experimental loop closure: adopt the fused fix and let the velocity
    // prior widen so the filter can re-estimate it.
    updated.state(0) = out.fused.position.x;
    updated.state(1) = out.fused.position.y;
    updated.covariance(0, 0) = out.fused.var_x;
    updated.covariance(1, 1) = out.fused.var_y;
    updated.covariance(0, 1) = updated.covariance(1, 0) = 0.0;
    updated.covariance.block<2, 2>(0, 2).setZero();
    updated.covariance.block<2, 2>(2, 0).setZero();
    updated.covariance(2, 2) *= 2.0;
    updated.covariance(3, 3) *= 2.0;
  }

  return {std::move(updated), std::move(out)};
}

}  // namespace hybridloc
