#include "hybridloc/scenario.hpp"

#include <cmath>
#include <set>
#include <string>

#include "hybridloc/errors.hpp"

namespace hybridloc {

namespace {

void validate_anchor(const Anchor& a) {
  if (a.id.empty()) {
    throw config_error("anchor id must not be empty");
  }
  if (!is_finite(a.position) || !std::isfinite(a.tx_ref_power_dbm)) {
    throw config_error("anchor '" + a.id + "' has non-finite parameters");
  }
  if (!(a.path_loss_exponent > 0.0)) {
    throw config_error("anchor '" + a.id + "': path_loss_exponent must be > 0");
  }
  if (!(a.rss_noise_stddev_db > 0.0)) {
    throw config_error("anchor '" + a.id + "': rss_noise_stddev_db must be > 0");
  }
}

void validate_sensor(const SensorModel& m) {
  if (m.id.empty()) {
    throw config_error("sensor id must not be empty");
  }
  if (std::abs(norm(m.boresight) - 1.0) > 1e-9) {
    throw config_error("sensor '" + m.id + "': boresight must be a unit vector");
  }
  const double half_pi = std::acos(-1.0) / 2.0;
  if (!(m.fov_half_angle > 0.0) || m.fov_half_angle >= half_pi) {
    throw config_error("sensor '" + m.id + "': fov_half_angle must be in (0, pi/2)");
  }
  if (!(m.measured_fov_half_angle > 0.0) || m.measured_fov_half_angle >= half_pi) {
    throw config_error("sensor '" + m.id +
                       "': measured_fov_half_angle must be in (0, pi/2)");
  }
  if (!(m.max_range > 0.0)) {
    throw config_error("sensor '" + m.id + "': max_range must be > 0");
  }
  for (size_t i = 0; i < m.bias_curve.size(); ++i) {
    if (!(m.bias_curve[i].distance > 0.0)) {
      throw config_error("sensor '" + m.id + "': bias table distances must be > 0");
    }
    if (i > 0 && !(m.bias_curve[i].distance > m.bias_curve[i - 1].distance)) {
      throw config_error("sensor '" + m.id +
                         "': bias table distances must be strictly increasing");
    }
  }
  for (double c : m.stddev_cubic) {
    if (!std::isfinite(c)) {
      throw config_error("sensor '" + m.id + "': stddev cubic has non-finite coefficient");
    }
  }
}

}  // namespace

void validate_scenario(const Scenario& sc) {
  if (sc.anchors.size() < 3) {
    throw config_error("scenario needs at least 3 anchors, got " +
                       std::to_string(sc.anchors.size()));
  }
  std::set<std::string> ids;
  for (const auto& a : sc.anchors) {
    validate_anchor(a);
    if (!ids.insert(a.id).second) {
      throw config_error("duplicate id '" + a.id + "'");
    }
  }
  for (size_t i = 0; i < sc.anchors.size(); ++i) {
    for (size_t j = i + 1; j < sc.anchors.size(); ++j) {
      if (sc.anchors[i].position == sc.anchors[j].position) {
        throw config_error("anchors '" + sc.anchors[i].id + "' and '" +
                           sc.anchors[j].id + "' share a position");
      }
    }
  }
  for (const auto& m : sc.sensors) {
    validate_sensor(m);
    if (!ids.insert(m.id).second) {
      throw config_error("duplicate id '" + m.id + "'");
    }
  }
  validate_polyline(sc.trajectory);
  if (!(sc.walk_speed > 0.0)) {
    throw config_error("walk_speed must be > 0");
  }
  if (!(sc.tick_rate > 0.0)) {
    throw config_error("tick_rate must be > 0");
  }
  if (!(sc.filter.accel_psd > 0.0)) {
    throw config_error("filter accel_psd must be > 0");
  }
  if (!(sc.filter.init_position_var > 0.0) || !(sc.filter.init_velocity_var > 0.0)) {
    throw config_error("filter init variances must be > 0");
  }
}

const SensorModel* find_sensor(std::span<const SensorModel> sensors, const std::string& id) {
  for (const auto& m : sensors) {
    if (m.id == id) {
      return &m;
    }
  }
  return nullptr;
}

Scenario default_scenario() {
  Scenario sc;
  const double room_w = 8.0;
  const double room_h = 6.0;
  for (int i = 0; i < 4; ++i) {
    Anchor a;
    a.id = "a" + std::to_string(i + 1);
    a.position = {(i == 1 || i == 2) ? room_w : 0.0, (i >= 2) ? room_h : 0.0};
    a.tx_ref_power_dbm = -55.0;
    a.path_loss_exponent = 2.0;
    a.rss_noise_stddev_db = 3.0;
    sc.anchors.push_back(a);
  }
  // Rangers on the west and south walls, each aimed along one trajectory leg
  // so the walk stays inside the cone for a useful stretch.
  sc.sensors.push_back(make_default_sensor("s1", {0.0, 1.5}, {1.0, 0.0}));
  sc.sensors.push_back(make_default_sensor("s2", {5.0, 0.0}, {0.0, 1.0}));
  sc.trajectory.vertices = {{0.5, 1.5}, {5.0, 1.5}, {5.0, 4.5}, {0.5, 4.5}};
  sc.walk_speed = 1.0;
  sc.tick_rate = 10.0;
  sc.master_seed = 7;
  sc.fov_mode = FovMode::kMeasured;
  sc.filter = FilterSettings{};
  return sc;
}

}  // namespace hybridloc
