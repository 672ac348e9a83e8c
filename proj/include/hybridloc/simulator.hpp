#ifndef HYBRIDLOC_SIMULATOR_HPP_
#define HYBRIDLOC_SIMULATOR_HPP_

#include <optional>
#include <vector>

#include "hybridloc/measurement.hpp"
#include "hybridloc/rng.hpp"
#include "hybridloc/scenario.hpp"

namespace hybridloc {

struct GroundTruthSample {
  double timestamp = 0.0;
  Point2 position;

  friend bool operator==(const GroundTruthSample&, const GroundTruthSample&) = default;
};

/// Constant-speed walk along the chain, sampled every 1/rate seconds starting
/// at the first vertex. The last sample lands at or before the last vertex.
std::vector<GroundTruthSample> gen_trajectory(const Polyline& line, double speed, double rate);

/// Cone half-angle the simulator applies for the given mode.
double effective_half_angle(const SensorModel& m, FovMode mode);

/// RSS sample for the tag at truth: model value plus Gaussian shadowing drawn
/// from rng. Pass rng = nullptr to disable noise (value equals the model
/// exactly).
Measurement simulate_rss(const Point2& truth, const Anchor& anchor, double timestamp,
                         Rng* rng);

/// Range return for the tag at truth, or nothing when the tag is outside the
/// detection cone or beyond max_range. The emitted value is true distance
/// plus the bias at the true distance plus Gaussian noise with the modeled
/// stddev; rng = nullptr disables the noise term.
std::optional<Measurement> simulate_range(const Point2& truth, const SensorModel& m,
                                          FovMode mode, double timestamp, Rng* rng);

struct SimulationResult {
  std::vector<GroundTruthSample> truth;
  std::vector<Measurement> measurements;  // sorted by (timestamp, source_id)
};

/// Full synthetic run: one RSS sample per anchor per tick plus the range
/// returns of whichever sensors detect the tag. Deterministic in
/// sc.master_seed.
SimulationResult run_scenario(const Scenario& sc);

}  // namespace hybridloc

#endif  // HYBRIDLOC_SIMULATOR_HPP_
