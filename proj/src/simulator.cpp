#include "hybridloc/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "hybridloc/errors.hpp"

namespace hybridloc {

std::vector<GroundTruthSample> gen_trajectory(const Polyline& line, double speed,
                                              double rate) {
  validate_polyline(line);
  if (!(speed > 0.0) || !(rate > 0.0)) {
    throw config_error("walk speed and tick rate must be > 0");
  }

  std::vector<double> cumulative{0.0};
  for (size_t i = 1; i < line.vertices.size(); ++i) {
    cumulative.push_back(cumulative.back() +
                         distance(line.vertices[i - 1], line.vertices[i]));
  }
  const double total = cumulative.back();
  // Small guard so an arc length landing exactly on the end is kept.
  const auto ticks = static_cast<size_t>(std::floor(total / speed * rate + 1e-9)) + 1;

  std::vector<GroundTruthSample> samples;
  samples.reserve(ticks);
  size_t segment = 0;
  for (size_t k = 0; k < ticks; ++k) {
    const double t = static_cast<double>(k) / rate;
    const double arc = std::min(speed * t, total);
    while (segment + 2 < cumulative.size() && arc > cumulative[segment + 1]) {
      ++segment;
    }
    const Point2& a = line.vertices[segment];
    const Point2& b = line.vertices[segment + 1];
    const double seg_len = cumulative[segment + 1] - cumulative[segment];
    const double along = (arc - cumulative[segment]) / seg_len;
    samples.push_back({t, a + along * (b - a)});
  }
  return samples;
}

double effective_half_angle(const SensorModel& m, FovMode mode) {
  return mode == FovMode::kDeclared ? m.fov_half_angle : m.measured_fov_half_angle;
}

Measurement simulate_rss(const Point2& truth, const Anchor& anchor, double timestamp,
                         Rng* rng) {
  double value = rss_model(truth, anchor);
  if (rng != nullptr) {
    value += anchor.rss_noise_stddev_db * rng->normal();
  }
  return {timestamp, anchor.id, MeasurementKind::kRss, value};
}

std::optional<Measurement> simulate_range(const Point2& truth, const SensorModel& m,
                                          FovMode mode, double timestamp, Rng* rng) {
  const Point2 offset = truth - m.position;
  const double d = norm(offset);
  if (d == 0.0 || d > m.max_range) {
    return std::nullopt;
  }
  const double cos_angle =
      std::clamp(dot(offset, m.boresight) / d, -1.0, 1.0);
  if (std::acos(cos_angle) > effective_half_angle(m, mode)) {
    return std::nullopt;
  }
  // Bias enters as a function of the true distance; the corrector downstream
  // only sees the measured value. That asymmetry is part of the model.
  double value = d + interpolate_bias(m.bias_curve, d);
  if (rng != nullptr) {
    value += stddev_at(m, d) * rng->normal();
    value = std::max(value, kMinCorrectedRange);
  }
  return Measurement{timestamp, m.id, MeasurementKind::kRange, value};
}

SimulationResult run_scenario(const Scenario& sc) {
  validate_scenario(sc);
  Rng rng(sc.master_seed);

  SimulationResult result;
  result.truth = gen_trajectory(sc.trajectory, sc.walk_speed, sc.tick_rate);
  for (const auto& sample : result.truth) {
    for (const auto& anchor : sc.anchors) {
      result.measurements.push_back(
          simulate_rss(sample.position, anchor, sample.timestamp, &rng));
    }
    for (const auto& sensor : sc.sensors) {
      if (auto range = simulate_range(sample.position, sensor, sc.fov_mode,
                                      sample.timestamp, &rng)) {
        result.measurements.push_back(std::move(*range));
      }
    }
  }
  std::stable_sort(result.measurements.begin(), result.measurements.end(),
                   [](const Measurement& a, const Measurement& b) {
                     if (a.timestamp != b.timestamp) {
                       return a.timestamp < b.timestamp;
                     }
                     return a.source_id < b.source_id;
                   });
  return result;
}

}  // namespace hybridloc
