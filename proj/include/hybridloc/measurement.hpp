#ifndef HYBRIDLOC_MEASUREMENT_HPP_
#define HYBRIDLOC_MEASUREMENT_HPP_

#include <string>

#include "hybridloc/geometry.hpp"

namespace hybridloc {

enum class MeasurementKind {
  kRss,    // received signal strength from a radio anchor, dBm
  kRange,  // distance from a proximity sensor, meters
};

/// One timestamped sample from an anchor or a proximity sensor.
struct Measurement {
  double timestamp = 0.0;  // seconds
  std::string source_id;
  MeasurementKind kind = MeasurementKind::kRss;
  double value = 0.0;  // dBm for kRss, meters for kRange

  friend bool operator==(const Measurement&, const Measurement&) = default;
};

/// Planar position with per-axis variance. This is the unit exchanged by the
/// inverse-variance fusion stages; cross covariance is dropped by design.
struct PositionEstimate {
  Point2 position;
  double var_x = 0.0;  // m^2
  double var_y = 0.0;  // m^2

  friend bool operator==(const PositionEstimate&, const PositionEstimate&) = default;
};

}  // namespace hybridloc

#endif  // HYBRIDLOC_MEASUREMENT_HPP_
