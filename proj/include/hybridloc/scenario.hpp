#ifndef HYBRIDLOC_SCENARIO_HPP_
#define HYBRIDLOC_SCENARIO_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "hybridloc/ekf.hpp"
#include "hybridloc/geometry.hpp"
#include "hybridloc/proximity.hpp"

namespace hybridloc {

/// Which detection cone the simulator applies.
enum class FovMode {
  kDeclared,  // the cone width from the sensor's data sheet setting
  kMeasured,  // the narrower cone observed on a person-sized target
};

/// Tracker configuration. Initialization defaults to the anchor centroid
/// with a wide room-scale prior.
struct FilterSettings {
  double accel_psd = 0.5;                  // (m/s^2)^2
  std::optional<Point2> init_position;     // centroid of anchors when unset
  double init_position_var = 25.0;         // m^2
  double init_velocity_var = 1.0;          // (m/s)^2

  friend bool operator==(const FilterSettings&, const FilterSettings&) = default;
};

/// Complete description of one simulated walk: infrastructure, reference
/// trajectory, sampling and noise seeds.
struct Scenario {
  std::vector<Anchor> anchors;
  std::vector<SensorModel> sensors;
  Polyline trajectory;
  double walk_speed = 1.0;   // m/s
  double tick_rate = 10.0;   // Hz
  uint64_t master_seed = 1;
  FovMode fov_mode = FovMode::kMeasured;
  FilterSettings filter;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Throws a config error describing the first violated invariant
/// (anchor count, unique ids, unit boresights, bias table ordering, ...).
void validate_scenario(const Scenario& sc);

const SensorModel* find_sensor(std::span<const SensorModel> sensors, const std::string& id);

/// Room-scale default: 8 m x 6 m room, four corner anchors, two rangers on
/// adjacent walls aimed along the first two trajectory legs, 12 m three-leg
/// walk at 1 m/s sampled at 10 Hz. Matches data/default_scenario.json.
Scenario default_scenario();

}  // namespace hybridloc

#endif  // HYBRIDLOC_SCENARIO_HPP_
