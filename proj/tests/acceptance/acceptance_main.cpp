// Acceptance gate: end-to-end checks of the shipped behavior, one printed
// line per criterion. Exits nonzero if any criterion fails. Tolerances are
// pinned here, next to the checks they guard.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "hybridloc/ekf.hpp"
#include "hybridloc/evaluation.hpp"
#include "hybridloc/fusion.hpp"
#include "hybridloc/geometry.hpp"
#include "hybridloc/io.hpp"
#include "hybridloc/pipeline.hpp"
#include "hybridloc/proximity.hpp"
#include "hybridloc/rng.hpp"
#include "hybridloc/simulator.hpp"

namespace {

using namespace hybridloc;

// --- pinned tolerances and workloads ---

constexpr int kFusionCases = 10000;
constexpr double kFusionExampleTol = 1e-12;
constexpr double kFusionPropertyTol = 1e-9;

constexpr int kJacobianCases = 100;
constexpr double kJacobianRelTol = 1e-5;

constexpr int kStaticTicks = 200;
constexpr double kStaticTickDt = 0.1;           // s
constexpr double kStaticNoiseFreeTol = 1e-3;    // m, final error without noise
constexpr double kStaticNoisyRmsTol = 1.0;      // m, RMS over the settled half

constexpr double kBiasSweepStart = 0.5;         // m
constexpr double kBiasSweepEnd = 3.0;           // m
constexpr double kBiasSweepStep = 0.05;         // m
constexpr double kBiasRoundTripTol = 0.05;      // m

constexpr double kFovProbeDistance = 3.0;       // m
constexpr double kExpectedMeasuredWidth = 0.64; // m across the cone at 3 m
constexpr double kExpectedDeclaredWidth = 1.44; // m
constexpr double kFovWidthTol = 0.02;           // m
constexpr double kFovProbeStep = 1e-4;          // m

constexpr int kMonteCarloRuns = 20;
constexpr int kMonteCarloMinWins = 18;
constexpr double kMonteCarloMaxRatio = 0.6;     // pooled hybrid/BLE median

constexpr int kPolylineCases = 1000;
constexpr double kPolylineSampleStep = 1e-3;    // m along each segment
constexpr double kPolylineBruteTol = 1e-3;      // m

constexpr int kCdfCases = 1000;

constexpr int kDeterminismMontecarloRuns = 3;

struct CriterionResult {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

std::string data_file(const std::string& name) {
  return std::string(HYBRIDLOC_DATA_DIR "/") + name;
}

// --- criterion 1: inverse-variance fusion ---

CriterionResult check_fusion() {
  // Hand-worked example 1: x1 = 0 var 1 with x2 = 3 var 4 -> 0.6, var 0.8.
  const std::vector<PositionEstimate> pair{{{0.0, 0.0}, 1.0, 1.0}, {{3.0, 3.0}, 4.0, 4.0}};
  const PositionEstimate combined = combine_sensor_estimates(pair);
  const double ex1 = std::abs(combined.position.x - 0.6) + std::abs(combined.var_x - 0.8) +
                     std::abs(combined.position.y - 0.6) + std::abs(combined.var_y - 0.8);
  // Hand-worked example 2: a precise sensor outvotes the radio 400:4.
  const PositionEstimate ble{{0.0, 0.0}, 0.25, 0.25};
  const PositionEstimate prox{{1.0, 0.0}, 0.0025, 0.0025};
  const PositionEstimate fused = fuse(ble, prox);
  const double ex2 = std::abs(fused.position.x - 400.0 / 404.0) + std::abs(fused.position.y) +
                     std::abs(fused.var_x - 1.0 / 404.0) + std::abs(fused.var_y - 1.0 / 404.0);
  if (ex1 > kFusionExampleTol || ex2 > kFusionExampleTol) {
    return {false, "hand examples off by " + fmt(ex1) + " / " + fmt(ex2)};
  }
  if (!(fuse(ble, std::nullopt) == ble)) {
    return {false, "missing proximity estimate must pass the radio estimate through"};
  }

  Rng rng(20240901);
  double worst = 0.0;
  for (int c = 0; c < kFusionCases; ++c) {
    const PositionEstimate a{{rng.uniform() * 8.0, rng.uniform() * 6.0},
                             0.01 + rng.uniform() * 25.0,
                             0.01 + rng.uniform() * 25.0};
    const PositionEstimate b{{rng.uniform() * 8.0, rng.uniform() * 6.0},
                             0.01 + rng.uniform() * 25.0,
                             0.01 + rng.uniform() * 25.0};
    const PositionEstimate f = fuse(a, b);

    const double wx = 1.0 / a.var_x + 1.0 / b.var_x;
    const double wy = 1.0 / a.var_y + 1.0 / b.var_y;
    worst = std::max(worst,
                     std::abs(f.position.x - (a.position.x / a.var_x + b.position.x / b.var_x) / wx));
    worst = std::max(worst,
                     std::abs(f.position.y - (a.position.y / a.var_y + b.position.y / b.var_y) / wy));
    worst = std::max(worst, std::abs(f.var_x - 1.0 / wx));
    worst = std::max(worst, std::abs(f.var_y - 1.0 / wy));

    // Structural guarantees: the mean stays between the inputs and the
    // combined variance beats both inputs.
    const double lo = std::min(a.position.x, b.position.x) - kFusionPropertyTol;
    const double hi = std::max(a.position.x, b.position.x) + kFusionPropertyTol;
    if (f.position.x < lo || f.position.x > hi || f.var_x >= std::min(a.var_x, b.var_x) ||
        f.var_y >= std::min(a.var_y, b.var_y)) {
      return {false, "convexity/variance-reduction violated at case " + std::to_string(c)};
    }

    // Order of the inputs must not matter.
    const PositionEstimate swapped = fuse(b, a);
    worst = std::max({worst, std::abs(f.position.x - swapped.position.x),
                      std::abs(f.position.y - swapped.position.y),
                      std::abs(f.var_x - swapped.var_x), std::abs(f.var_y - swapped.var_y)});

    // Scaling every variance by k keeps the mean and scales the variance by k.
    const double k = 0.25 + 3.0 * rng.uniform();
    PositionEstimate ak = a;
    PositionEstimate bk = b;
    ak.var_x *= k;
    ak.var_y *= k;
    bk.var_x *= k;
    bk.var_y *= k;
    const PositionEstimate fk = fuse(ak, bk);
    worst = std::max({worst, std::abs(fk.position.x - f.position.x),
                      std::abs(fk.position.y - f.position.y),
                      std::abs(fk.var_x - k * f.var_x), std::abs(fk.var_y - k * f.var_y)});
  }
  if (worst > kFusionPropertyTol) {
    return {false, "worst property deviation " + fmt(worst)};
  }
  return {true, std::to_string(kFusionCases) +
                    " random cases (closed form, symmetry, variance scaling), worst deviation " +
                    fmt(worst)};
}

// --- criterion 2: signal-model Jacobian against numeric differentiation ---

CriterionResult check_jacobian() {
  Rng rng(777);
  double worst_rel = 0.0;
  int tested = 0;
  while (tested < kJacobianCases) {
    Anchor a;
    a.id = "a";
    a.position = {rng.uniform() * 8.0, rng.uniform() * 6.0};
    a.path_loss_exponent = 1.5 + rng.uniform() * 2.0;
    const Point2 p{rng.uniform() * 8.0, rng.uniform() * 6.0};
    if (distance(p, a.position) < 0.2) {
      continue;  // stay clear of the clamped zone, where the model is flat
    }
    ++tested;
    const Eigen::RowVector2d jac = rss_position_jacobian(p, a);
    const double h = 1e-6;
    const double dx = (rss_model({p.x + h, p.y}, a) - rss_model({p.x - h, p.y}, a)) / (2 * h);
    const double dy = (rss_model({p.x, p.y + h}, a) - rss_model({p.x, p.y - h}, a)) / (2 * h);
    const double scale = std::max(1.0, std::hypot(jac(0), jac(1)));
    worst_rel = std::max(worst_rel, std::hypot(jac(0) - dx, jac(1) - dy) / scale);
  }
  if (worst_rel > kJacobianRelTol) {
    return {false, "worst relative mismatch " + fmt(worst_rel)};
  }
  return {true, std::to_string(kJacobianCases) + " geometries, worst relative mismatch " +
                    fmt(worst_rel)};
}

// --- criterion 3: tracker convergence on a stationary target ---

CriterionResult check_tracker_convergence() {
  const Scenario sc = default_scenario();
  const Point2 truth{2.5, 2.0};
  const ProcessNoise q{sc.filter.accel_psd};

  const auto run = [&](Rng* rng) {
    StateEstimate s = make_initial_state(sc.anchors, 0.0);
    std::vector<double> errors;
    for (int k = 0; k < kStaticTicks; ++k) {
      const double t = k * kStaticTickDt;
      if (k > 0) {
        s = predict(s, kStaticTickDt, q);
      }
      std::vector<Measurement> batch;
      batch.reserve(sc.anchors.size());
      for (const Anchor& a : sc.anchors) {
        batch.push_back(simulate_rss(truth, a, t, rng));
      }
      s = update(s, batch, sc.anchors);
      errors.push_back(distance(s.position(), truth));
    }
    return errors;
  };

  const auto clean = run(nullptr);
  if (clean.back() > kStaticNoiseFreeTol) {
    return {false, "noise-free final error " + fmt(clean.back()) + " m"};
  }

  Rng rng(2024);
  const auto noisy = run(&rng);
  double sq = 0.0;
  const int half = kStaticTicks / 2;
  for (int k = half; k < kStaticTicks; ++k) {
    sq += noisy[k] * noisy[k];
  }
  const double rms = std::sqrt(sq / (kStaticTicks - half));
  if (rms > kStaticNoisyRmsTol) {
    return {false, "settled RMS error " + fmt(rms) + " m under RSS noise"};
  }
  return {true, "noise-free final error " + fmt(clean.back()) + " m, noisy settled RMS " +
                    fmt(rms) + " m"};
}

// --- criterion 4: ranging bias round trip ---

CriterionResult check_bias_roundtrip() {
  const SensorModel m = make_default_sensor("s", {0.0, 0.0}, {1.0, 0.0});
  double worst = 0.0;
  double worst_d = 0.0;
  for (double d = kBiasSweepStart; d <= kBiasSweepEnd + 1e-12; d += kBiasSweepStep) {
    // The simulator adds the bias of the true distance; the corrector can only
    // key on the measured distance. The residual stays small because the
    // table's slope is modest.
    const double measured = d + interpolate_bias(m.bias_curve, d);
    const double corrected = correct_bias(m, measured);
    const double err = std::abs(corrected - d);
    if (err > worst) {
      worst = err;
      worst_d = d;
    }
  }
  if (worst > kBiasRoundTripTol) {
    return {false, "worst residual " + fmt(worst) + " m at " + fmt(worst_d) + " m"};
  }
  return {true, "worst residual " + fmt(worst) + " m at " + fmt(worst_d) + " m true distance"};
}

// --- criterion 5: detection-cone widths ---

CriterionResult check_fov_widths() {
  const SensorModel m = make_default_sensor("s", {0.0, 0.0}, {1.0, 0.0});

  const auto probe_width = [&](FovMode mode) {
    double max_off = 0.0;
    for (double y = 0.0; y <= 1.5; y += kFovProbeStep) {
      if (simulate_range({kFovProbeDistance, y}, m, mode, 0.0, nullptr).has_value()) {
        max_off = y;
      }
    }
    return 2.0 * max_off;
  };

  const double declared_model = 2.0 * kFovProbeDistance * std::tan(effective_half_angle(m, FovMode::kDeclared));
  const double measured_model = 2.0 * kFovProbeDistance * std::tan(effective_half_angle(m, FovMode::kMeasured));
  const double declared_probe = probe_width(FovMode::kDeclared);
  const double measured_probe = probe_width(FovMode::kMeasured);

  if (std::abs(declared_model - kExpectedDeclaredWidth) > kFovWidthTol ||
      std::abs(measured_model - kExpectedMeasuredWidth) > kFovWidthTol) {
    return {false, "cone widths at 3 m: declared " + fmt(declared_model) + " m, measured " +
                       fmt(measured_model) + " m"};
  }
  if (std::abs(declared_probe - declared_model) > 3.0 * kFovProbeStep ||
      std::abs(measured_probe - measured_model) > 3.0 * kFovProbeStep) {
    return {false, "simulator gating disagrees with the cone model: probed declared " +
                       fmt(declared_probe) + " m vs " + fmt(declared_model) + " m"};
  }
  return {true, "widths at 3 m: declared " + fmt(declared_model) + " m, measured " +
                    fmt(measured_model) + " m, simulator gating agrees"};
}

// --- criterion 6: the fused track beats the radio track statistically ---

CriterionResult check_montecarlo() {
  const MonteCarloReport report = run_montecarlo(default_scenario(), kMonteCarloRuns);
  const std::string detail = std::to_string(report.hybrid_wins) + "/" +
                             std::to_string(kMonteCarloRuns) + " wins, pooled median ratio " +
                             fmt(report.pooled_median_ratio) + " (BLE " +
                             fmt(report.pooled_ble_median) + " m, hybrid " +
                             fmt(report.pooled_hybrid_median) + " m)";
  if (report.hybrid_wins < kMonteCarloMinWins) {
    return {false, detail};
  }
  if (!(report.pooled_median_ratio < kMonteCarloMaxRatio)) {
    return {false, detail};
  }
  return {true, detail};
}

// --- criterion 7: evaluation metrics against brute force ---

CriterionResult check_metrics() {
  Rng rng(31337);

  // Distance to a chain of segments vs dense sampling.
  double worst = 0.0;
  for (int c = 0; c < kPolylineCases; ++c) {
    Polyline line;
    const int n = 2 + static_cast<int>(rng.uniform() * 4.0);
    for (int i = 0; i < n; ++i) {
      line.vertices.push_back({rng.uniform() * 8.0, rng.uniform() * 6.0});
    }
    const Point2 q{rng.uniform() * 10.0 - 1.0, rng.uniform() * 8.0 - 1.0};
    const double fast = distance_to_polyline(q, line);

    double brute = distance(q, line.vertices.front());
    for (size_t i = 0; i + 1 < line.vertices.size(); ++i) {
      const Point2 a = line.vertices[i];
      const Point2 b = line.vertices[i + 1];
      const double len = distance(a, b);
      const int steps = std::max(1, static_cast<int>(len / kPolylineSampleStep));
      for (int k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) / steps;
        brute = std::min(brute, distance(q, {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}));
      }
    }
    worst = std::max(worst, std::abs(fast - brute));
    if (fast > brute + kPolylineBruteTol) {
      return {false, "distance above sampled minimum by " + fmt(fast - brute)};
    }
  }
  if (worst > kPolylineBruteTol) {
    return {false, "worst polyline-distance deviation " + fmt(worst)};
  }

  // Median / CDF / quantile vs counting definitions; exact equality.
  for (int c = 0; c < kCdfCases; ++c) {
    const int n = 1 + static_cast<int>(rng.uniform() * 40.0);
    std::vector<double> values;
    for (int i = 0; i < n; ++i) {
      values.push_back(std::floor(rng.uniform() * 24.0) / 8.0);
    }
    const EmpiricalCdf dist(values);
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());

    const double median =
        n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    if (dist.median() != median) {
      return {false, "median mismatch on case " + std::to_string(c)};
    }
    const double t = rng.uniform() * 3.5 - 0.25;
    int count = 0;
    for (double v : values) {
      count += v <= t;
    }
    if (dist.evaluate(t) != static_cast<double>(count) / n) {
      return {false, "CDF mismatch on case " + std::to_string(c)};
    }
    const double p = 0.01 + 0.99 * rng.uniform();
    const auto rank = std::min<size_t>(static_cast<size_t>(std::ceil(p * n)), sorted.size());
    if (dist.quantile(p) != sorted[rank - 1]) {
      return {false, "quantile mismatch on case " + std::to_string(c)};
    }
  }
  return {true, std::to_string(kPolylineCases) + " polyline cases (worst deviation " +
                    fmt(worst) + "), " + std::to_string(kCdfCases) + " distribution cases exact"};
}

// --- criterion 8: byte-identical reruns of the whole file pipeline ---

CriterionResult check_determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "hybridloc_acceptance";
  fs::remove_all(root);

  const std::string scenario = data_file("default_scenario.json");
  std::vector<std::string> names;

  const auto run_all = [&](const fs::path& dir) {
    fs::create_directories(dir);
    const auto p = [&](const char* name) { return (dir / name).string(); };
    cmd_simulate(scenario, p("log.csv"), p("truth.csv"));
    cmd_localize(scenario, p("log.csv"), p("ble.csv"), LocalizeMode::kBle);
    cmd_localize(scenario, p("log.csv"), p("hybrid.csv"), LocalizeMode::kHybrid);
    EvaluateArgs args;
    args.scenario_path = scenario;
    args.ble_estimates_path = p("ble.csv");
    args.hybrid_estimates_path = p("hybrid.csv");
    args.out_report_path = p("report.json");
    cmd_evaluate(args);
    cmd_montecarlo(scenario, kDeterminismMontecarloRuns, p("mc.json"));
    names = {"log.csv",          "truth.csv",           "ble.csv",
             "hybrid.csv",       "report.json",         "report_cdf_ble.csv",
             "report_cdf_hybrid.csv", "report_errors_ble.csv", "report_errors_hybrid.csv",
             "mc.json"};
  };

  run_all(root / "first");
  run_all(root / "second");

  for (const std::string& name : names) {
    const std::string a = read_text_file((root / "first" / name).string());
    const std::string b = read_text_file((root / "second" / name).string());
    if (a != b) {
      return {false, name + " differs between identical runs"};
    }
    if (a.empty()) {
      return {false, name + " is empty"};
    }
  }
  return {true, std::to_string(names.size()) + " output files byte-identical across reruns"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* label;
    std::function<CriterionResult()> run;
  };
  const std::vector<Criterion> criteria{
      {"inverse-variance fusion matches the closed form", check_fusion},
      {"signal-model Jacobian matches numeric differentiation", check_jacobian},
      {"tracker converges on a stationary target", check_tracker_convergence},
      {"ranging bias correction round-trips", check_bias_roundtrip},
      {"detection-cone widths and simulator gating", check_fov_widths},
      {"fused track beats the radio track over repeated runs", check_montecarlo},
      {"evaluation metrics agree with brute force", check_metrics},
      {"file pipeline is byte-identical across reruns", check_determinism},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    CriterionResult result;
    try {
      result = criteria[i].run();
    } catch (const std::exception& e) {
      result = {false, std::string("exception: ") + e.what()};
    }
    failures += result.pass ? 0 : 1;
    std::printf("[%s] criterion %zu: %s (%s)\n", result.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].label, result.detail.c_str());
  }
  if (failures > 0) {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
