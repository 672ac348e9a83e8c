#include <cmath>
#include <optional>
#include <vector>

#include <doctest.h>

#include "hybridloc/ekf.hpp"
#include "hybridloc/fusion.hpp"
#include "hybridloc/rng.hpp"
#include "hybridloc/scenario.hpp"
#include "test_helpers.hpp"

using namespace hybridloc;

namespace {

std::vector<Measurement> rss_tick(const Scenario& sc, const Point2& truth, double t) {
  std::vector<Measurement> tick;
  for (const auto& a : sc.anchors) {
    tick.push_back({t, a.id, MeasurementKind::kRss, rss_model(truth, a)});
  }
  return tick;
}

}  // namespace

TEST_CASE("fusing with no proximity estimate passes the radio estimate through") {
  const PositionEstimate ble{{1.0, 2.0}, 0.25, 0.36};
  CHECK(fuse(ble, std::nullopt) == ble);
}

TEST_CASE("fusion reproduces the hand-worked dominance example") {
  // Radio says (0, 0) with variance 0.25; a nearby sensor says (1, 0) with
  // variance 0.0025. The sensor wins 400:4.
  const PositionEstimate ble{{0.0, 0.0}, 0.25, 0.25};
  const PositionEstimate prox{{1.0, 0.0}, 0.0025, 0.0025};
  const PositionEstimate out = fuse(ble, prox);
  CHECK_NEAR(out.position.x, 400.0 / 404.0, 1e-12);
  CHECK_NEAR(out.position.y, 0.0, 1e-12);
  CHECK_NEAR(out.var_x, 1.0 / 404.0, 1e-12);
  CHECK_NEAR(out.var_y, 1.0 / 404.0, 1e-12);
}

TEST_CASE("fusion equals the general combination on two estimates") {
  Rng rng(808);
  for (int c = 0; c < 500; ++c) {
    const PositionEstimate a{{10 * rng.uniform(), 10 * rng.uniform()},
                             0.01 + rng.uniform(), 0.01 + rng.uniform()};
    const PositionEstimate b{{10 * rng.uniform(), 10 * rng.uniform()},
                             0.01 + rng.uniform(), 0.01 + rng.uniform()};
    const std::vector<PositionEstimate> pair{a, b};
    CHECK(fuse(a, b) == combine_sensor_estimates(pair));
  }
}

TEST_CASE("hybrid step validates its tick") {
  const Scenario sc = default_scenario();
  const StateEstimate s = make_initial_state(sc.anchors, 0.0);

  CHECK_THROWS_CODE(hybrid_step(s, {}, sc), ErrorCode::kData);

  std::vector<Measurement> mixed = rss_tick(sc, {2.0, 1.5}, 1.0);
  mixed.push_back({1.1, "a1", MeasurementKind::kRss, -60.0});
  CHECK_THROWS_CODE(hybrid_step(s, mixed, sc), ErrorCode::kOrder);

  const StateEstimate later = make_initial_state(sc.anchors, 5.0);
  const auto tick = rss_tick(sc, {2.0, 1.5}, 1.0);
  CHECK_THROWS_CODE(hybrid_step(later, tick, sc), ErrorCode::kOrder);

  std::vector<Measurement> unknown = rss_tick(sc, {2.0, 1.5}, 1.0);
  unknown.push_back({1.0, "ghost", MeasurementKind::kRange, 1.0});
  CHECK_THROWS_CODE(hybrid_step(s, unknown, sc), ErrorCode::kData);
}

TEST_CASE("radio-only tick: no proximity block, fused equals the radio fix") {
  const Scenario sc = default_scenario();
  const StateEstimate s = make_initial_state(sc.anchors, 0.0);
  const auto tick = rss_tick(sc, {2.0, 1.5}, 0.1);

  const auto [next, out] = hybrid_step(s, tick, sc);
  CHECK(out.timestamp == 0.1);
  CHECK_FALSE(out.proximity.has_value());
  CHECK(out.detecting_sensor_ids.empty());
  CHECK(out.fused == out.ble_only);
  CHECK(out.ble_only == ble_estimate(next));
  CHECK(next.timestamp == 0.1);
}

TEST_CASE("a range return produces a proximity estimate and shifts the fused fix") {
  const Scenario sc = default_scenario();
  const StateEstimate s = make_initial_state(sc.anchors, 0.0);
  // Tag on the first sensor's boresight at 2 m; noiseless return is 2.03.
  std::vector<Measurement> tick = rss_tick(sc, {2.0, 1.5}, 0.0);
  tick.push_back({0.0, "s1", MeasurementKind::kRange, 2.03});

  const auto [next, out] = hybrid_step(s, tick, sc);
  REQUIRE(out.proximity.has_value());
  CHECK(out.detecting_sensor_ids == std::vector<std::string>{"s1"});
  // The proximity fix lies on the boresight at the bias-corrected distance.
  const SensorModel& s1 = sc.sensors[0];
  const double corrected = correct_bias(s1, 2.03);
  CHECK_NEAR(out.proximity->position.x, corrected, 1e-12);
  CHECK_NEAR(out.proximity->position.y, 1.5, 1e-12);
  // Fusion recomputed from the two published inputs gives the published fix.
  CHECK(out.fused == fuse(out.ble_only, out.proximity));
  // The sensor is far more certain than the radio here, so it dominates.
  CHECK(out.fused.var_x < out.ble_only.var_x);
  CHECK(std::abs(out.fused.position.x - out.proximity->position.x) <
        std::abs(out.fused.position.x - out.ble_only.position.x));
}

TEST_CASE("range returns out of range yield no detection, not an error") {
  const Scenario sc = default_scenario();
  const StateEstimate s = make_initial_state(sc.anchors, 0.0);
  std::vector<Measurement> tick = rss_tick(sc, {2.0, 1.5}, 0.0);
  tick.push_back({0.0, "s1", MeasurementKind::kRange, 3.9});  // corrects past max_range

  const auto [next, out] = hybrid_step(s, tick, sc);
  CHECK_FALSE(out.proximity.has_value());
  CHECK(out.detecting_sensor_ids.empty());
  CHECK(out.fused == out.ble_only);
}

TEST_CASE("detections from several sensors combine; ids come out sorted") {
  Scenario sc = default_scenario();
  sc.sensors.clear();
  sc.sensors.push_back(make_default_sensor("sB", {0.0, 0.0}, {1.0, 0.0}));
  sc.sensors.push_back(make_default_sensor("sA", {0.0, 0.2}, {1.0, 0.0}));
  const StateEstimate s = make_initial_state(sc.anchors, 0.0);

  std::vector<Measurement> tick = rss_tick(sc, {1.5, 0.1}, 0.0);
  tick.push_back({0.0, "sB", MeasurementKind::kRange, 1.3});
  tick.push_back({0.0, "sA", MeasurementKind::kRange, 1.2});

  const auto [next, out] = hybrid_step(s, tick, sc);
  REQUIRE(out.proximity.has_value());
  CHECK(out.detecting_sensor_ids == std::vector<std::string>{"sA", "sB"});
  // The combined fix is recomputed here from the two single-sensor fixes.
  const auto ea = sensor_estimate(sc.sensors[1], 1.2);
  const auto eb = sensor_estimate(sc.sensors[0], 1.3);
  REQUIRE(ea.has_value());
  REQUIRE(eb.has_value());
  const std::vector<PositionEstimate> points{*eb, *ea};  // tick order
  CHECK(*out.proximity == combine_sensor_estimates(points));
}

TEST_CASE("proximity never feeds back into the tracker by default") {
  const Scenario sc = default_scenario();
  const StateEstimate s = make_initial_state(sc.anchors, 0.0);
  std::vector<Measurement> with_range = rss_tick(sc, {2.0, 1.5}, 0.0);
  with_range.push_back({0.0, "s1", MeasurementKind::kRange, 2.03});
  const auto rss_only = rss_tick(sc, {2.0, 1.5}, 0.0);

  const auto [state_a, out_a] = hybrid_step(s, with_range, sc);
  const auto [state_b, out_b] = hybrid_step(s, rss_only, sc);
  CHECK(state_a.state == state_b.state);
  CHECK(state_a.covariance == state_b.covariance);
  CHECK(out_a.fused.position.x != out_b.fused.position.x);  // the output did fuse
}

TEST_CASE("experimental feedback adopts the fused fix and widens velocity") {
  const Scenario sc = default_scenario();
  const StateEstimate s = make_initial_state(sc.anchors, 0.0);
  std::vector<Measurement> tick = rss_tick(sc, {2.0, 1.5}, 0.0);
  tick.push_back({0.0, "s1", MeasurementKind::kRange, 2.03});

  HybridOptions feedback;
  feedback.fusion_feedback = true;
  const auto [plain, out_plain] = hybrid_step(s, tick, sc);
  const auto [fed, out_fed] = hybrid_step(s, tick, sc, feedback);

  CHECK(out_fed.fused == out_plain.fused);  // the tick's output is unchanged
  CHECK(fed.state(0) == out_fed.fused.position.x);
  CHECK(fed.state(1) == out_fed.fused.position.y);
  CHECK(fed.covariance(0, 0) == out_fed.fused.var_x);
  CHECK(fed.covariance(1, 1) == out_fed.fused.var_y);
  CHECK(fed.covariance(0, 1) == 0.0);
  CHECK(fed.covariance(0, 2) == 0.0);
  CHECK(fed.covariance(1, 3) == 0.0);
  CHECK(fed.covariance(2, 2) == 2.0 * plain.covariance(2, 2));
  CHECK(fed.covariance(3, 3) == 2.0 * plain.covariance(3, 3));
  // Without a detection the flag is inert.
  const auto rss_only = rss_tick(sc, {2.0, 1.5}, 0.0);
  const auto [fed2, out2] = hybrid_step(s, rss_only, sc, feedback);
  const auto [plain2, outp2] = hybrid_step(s, rss_only, sc);
  CHECK(fed2.state == plain2.state);
  CHECK(fed2.covariance == plain2.covariance);
}
