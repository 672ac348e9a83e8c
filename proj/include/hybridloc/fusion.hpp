#ifndef HYBRIDLOC_FUSION_HPP_
#define HYBRIDLOC_FUSION_HPP_

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hybridloc/ekf.hpp"
#include "hybridloc/scenario.hpp"

namespace hybridloc {

/// Per-tick result of the hybrid pipeline. When no sensor detected the
/// target, proximity is empty and fused equals ble_only exactly.
struct HybridOutput {
  double timestamp = 0.0;
  PositionEstimate ble_only;
  std::optional<PositionEstimate> proximity;
  PositionEstimate fused;
  std::vector<std::string> detecting_sensor_ids;  // sorted
};

struct HybridOptions {
  /// Experimental: reset the tracker mean to the fused position after each
  /// tick with a detection. Off by default; the fused output normally does
  /// not re-enter the filter.
  bool fusion_feedback = false;

  friend bool operator==(const HybridOptions&, const HybridOptions&) = default;
};

/// Inverse-variance combination of a radio-based estimate with an optional
/// combined proximity estimate. Without a proximity estimate the radio
/// estimate passes through unchanged.
PositionEstimate fuse(const PositionEstimate& ble,
                      const std::optional<PositionEstimate>& prox);

/// One tick of the hybrid pipeline: time update to the tick's timestamp, EKF
/// measurement update with the tick's RSS batch, per-sensor point estimates
/// for the tick's range returns, their combination, and the final fusion.
/// Returns the advanced tracker state and the tick output. All measurements
/// in the tick must share one timestamp >= the state's.
std::pair<StateEstimate, HybridOutput> hybrid_step(const StateEstimate& state,
                                                   std::span<const Measurement> tick,
                                                   const Scenario& scenario,
                                                   const HybridOptions& options = {});

}  // namespace hybridloc

#endif  // HYBRIDLOC_FUSION_HPP_
