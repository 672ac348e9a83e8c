#include "hybridloc/pipeline.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hybridloc/errors.hpp"
#include "hybridloc/rng.hpp"
#include "hybridloc/simulator.hpp"

namespace hybridloc {

const char* localize_mode_name(LocalizeMode mode) {
  return mode == LocalizeMode::kBle ? "ble" : "hybrid";
}

std::vector<EstimateRow> localize_measurements(const Scenario& sc,
                                               std::span<const Measurement> measurements,
                                               LocalizeMode mode, const HybridOptions& options) {
  validate_scenario(sc);
  for (size_t i = 1; i < measurements.size(); ++i) {
    if (measurements[i].timestamp < measurements[i - 1].timestamp) {
      throw order_error("measurement stream is not sorted by timestamp");
    }
  }
  std::vector<EstimateRow> rows;
  if (measurements.empty()) {
    return rows;
  }

  StateEstimate state =
      sc.filter.init_position
          ? make_initial_state(*sc.filter.init_position, measurements.front().timestamp,
                               sc.filter.init_position_var, sc.filter.init_velocity_var)
          : make_initial_state(sc.anchors, measurements.front().timestamp,
                               sc.filter.init_position_var, sc.filter.init_velocity_var);

  std::vector<Measurement> rss_only;
  size_t i = 0;
  while (i < measurements.size()) {
    size_t j = i + 1;
    while (j < measurements.size() && measurements[j].timestamp == measurements[i].timestamp) {
      ++j;
    }
    std::span<const Measurement> tick = measurements.subspan(i, j - i);
    i = j;
    if (mode == LocalizeMode::kBle) {
      rss_only.clear();
      for (const Measurement& m : tick) {
        if (m.kind == MeasurementKind::kRss) {
          rss_only.push_back(m);
        }
      }
      // A tick carrying only range returns gives the radio track nothing to
      // observe. Skipping it is exact: the process noise composes over the
      // combined interval.
      if (rss_only.empty()) {
        continue;
      }
      tick = rss_only;
    }
    auto [next, output] = hybrid_step(state, tick, sc, options);
    state = next;

    EstimateRow row;
    row.timestamp = output.timestamp;
    row.mode = localize_mode_name(mode);
    row.position = output.fused.position;
    row.var_x = output.fused.var_x;
    row.var_y = output.fused.var_y;
    row.detecting_sensor_ids = output.detecting_sensor_ids;
    rows.push_back(std::move(row));
  }
  return rows;
}

Scenario load_scenario(const std::string& path, const RunOverrides& overrides) {
  Scenario sc = read_scenario_file(path);
  if (overrides.seed) {
    sc.master_seed = *overrides.seed;
  }
  if (overrides.fov_mode) {
    sc.fov_mode = *overrides.fov_mode;
  }
  return sc;
}

void cmd_simulate(const std::string& scenario_path, const std::string& out_log_path,
                  const std::string& out_truth_path, const RunOverrides& overrides) {
  const Scenario sc = load_scenario(scenario_path, overrides);
  const SimulationResult result = run_scenario(sc);
  write_measurement_log(out_log_path, result.measurements);
  write_ground_truth(out_truth_path, result.truth);
}

void cmd_localize(const std::string& scenario_path, const std::string& log_path,
                  const std::string& out_estimates_path, LocalizeMode mode,
                  const RunOverrides& overrides) {
  const Scenario sc = load_scenario(scenario_path, overrides);
  const auto measurements = read_measurement_log(log_path);
  // Resolve every source up front so a stray id is reported with its row
  // in the log file rather than surfacing mid-track.
  for (size_t i = 0; i < measurements.size(); ++i) {
    const Measurement& m = measurements[i];
    const bool known = m.kind == MeasurementKind::kRss
                           ? find_anchor(sc.anchors, m.source_id) != nullptr
                           : find_sensor(sc.sensors, m.source_id) != nullptr;
    if (!known) {
      throw data_error(log_path + " row " + std::to_string(i + 2) + ": unknown source_id '" +
                       m.source_id + "'");
    }
  }
  HybridOptions options;
  options.fusion_feedback = overrides.fusion_feedback;
  const auto rows = localize_measurements(sc, measurements, mode, options);
  write_estimates(out_estimates_path, rows);
}

namespace {

std::vector<TimedPosition> to_timed(std::span<const EstimateRow> rows) {
  std::vector<TimedPosition> out;
  out.reserve(rows.size());
  for (const EstimateRow& r : rows) {
    out.push_back({r.timestamp, r.position});
  }
  return out;
}

void check_mode(std::span<const EstimateRow> rows, const std::string& expected,
                const std::string& path) {
  for (const EstimateRow& r : rows) {
    if (r.mode != expected) {
      throw data_error(path + ": expected mode '" + expected + "' rows, found '" + r.mode + "'");
    }
  }
}

std::string derived_path(const std::string& report_path, const std::string& suffix) {
  std::string stem = report_path;
  if (stem.ends_with(".json")) {
    stem.resize(stem.size() - 5);
  }
  return stem + suffix;
}

std::string method_block(const MethodSummary& s) {
  return "{\"median_m\": " + format_double(s.median) + ", \"p90_m\": " + format_double(s.p90) +
         ", \"mean_m\": " + format_double(s.mean) + ", \"count\": " + std::to_string(s.count) +
         "}";
}

void append_summary_block(std::ostringstream& out, const char* name, const Summary& s,
                          bool trailing_comma) {
  out << "  \"" << name << "\": {\n";
  out << "    \"ble\": " << method_block(s.ble) << ",\n";
  out << "    \"hybrid\": " << method_block(s.hybrid) << ",\n";
  out << "    \"median_ratio_hybrid_over_ble\": "
      << format_double(s.median_ratio_hybrid_over_ble) << "\n";
  out << "  }" << (trailing_comma ? "," : "") << "\n";
}

}  // namespace

void cmd_evaluate(const EvaluateArgs& args, const RunOverrides& overrides) {
  const Scenario sc = load_scenario(args.scenario_path, overrides);
  const auto ble_rows = read_estimates(args.ble_estimates_path);
  const auto hybrid_rows = read_estimates(args.hybrid_estimates_path);
  check_mode(ble_rows, "ble", args.ble_estimates_path);
  check_mode(hybrid_rows, "hybrid", args.hybrid_estimates_path);

  const auto ble_tp = to_timed(ble_rows);
  const auto hybrid_tp = to_timed(hybrid_rows);

  // The reference walk is regenerated from the scenario; it is deterministic,
  // so it matches the ground truth of any log simulated from this scenario.
  const auto truth = gen_trajectory(sc.trajectory, sc.walk_speed, sc.tick_rate);
  std::vector<TimedPosition> truth_tp;
  truth_tp.reserve(truth.size());
  for (const GroundTruthSample& s : truth) {
    truth_tp.push_back({s.timestamp, s.position});
  }

  const ErrorSeries ble_traj = trajectory_errors(ble_tp, sc.trajectory, MethodLabel::kBleOnly);
  const ErrorSeries hybrid_traj =
      trajectory_errors(hybrid_tp, sc.trajectory, MethodLabel::kHybrid);
  const ErrorSeries ble_sync = timesync_errors(ble_tp, truth_tp, MethodLabel::kBleOnly);
  const ErrorSeries hybrid_sync = timesync_errors(hybrid_tp, truth_tp, MethodLabel::kHybrid);

  const Summary traj_summary = summarize(ble_traj, hybrid_traj);
  const Summary sync_summary = summarize(ble_sync, hybrid_sync);

  std::ostringstream report;
  report << "{\n";
  append_summary_block(report, "trajectory_error", traj_summary, true);
  append_summary_block(report, "timesync_error", sync_summary, false);
  report << "}\n";
  write_text_file(args.out_report_path, report.str());

  const std::string cdf_ble = args.out_cdf_ble_path.empty()
                                  ? derived_path(args.out_report_path, "_cdf_ble.csv")
                                  : args.out_cdf_ble_path;
  const std::string cdf_hybrid = args.out_cdf_hybrid_path.empty()
                                     ? derived_path(args.out_report_path, "_cdf_hybrid.csv")
                                     : args.out_cdf_hybrid_path;
  const std::string errors_ble = args.out_errors_ble_path.empty()
                                     ? derived_path(args.out_report_path, "_errors_ble.csv")
                                     : args.out_errors_ble_path;
  const std::string errors_hybrid = args.out_errors_hybrid_path.empty()
                                        ? derived_path(args.out_report_path, "_errors_hybrid.csv")
                                        : args.out_errors_hybrid_path;
  write_cdf_table(cdf_ble, cdf(ble_traj));
  write_cdf_table(cdf_hybrid, cdf(hybrid_traj));
  write_error_table(errors_ble, ble_traj, ble_sync);
  write_error_table(errors_hybrid, hybrid_traj, hybrid_sync);
}

void cmd_fit_sensor(const std::string& calibration_csv_path,
                    const std::optional<std::string>& bias_csv_path,
                    const std::string& out_model_path, std::ostream& info) {
  const auto samples = read_stddev_calibration(calibration_csv_path);
  const CubicFit fit = fit_stddev_cubic(samples);
  std::vector<BiasPoint> bias;
  if (bias_csv_path) {
    bias = read_bias_calibration(*bias_csv_path);
  }

  std::ostringstream out;
  out << "{\n";
  out << "  \"stddev_cubic\": [";
  for (size_t i = 0; i < fit.coefficients.size(); ++i) {
    out << (i == 0 ? "" : ", ") << format_double(fit.coefficients[i]);
  }
  out << "],\n";
  out << "  \"stddev_residual_rms_m\": " << format_double(fit.residual_rms) << ",\n";
  out << "  \"stddev_coefficient_standard_errors\": [";
  for (size_t i = 0; i < fit.standard_errors.size(); ++i) {
    out << (i == 0 ? "" : ", ") << format_double(fit.standard_errors[i]);
  }
  out << "],\n";
  out << "  \"bias_curve\": [";
  for (size_t i = 0; i < bias.size(); ++i) {
    out << (i == 0 ? "" : ", ") << "{\"distance_m\": " << format_double(bias[i].distance)
        << ", \"bias_m\": " << format_double(bias[i].bias) << "}";
  }
  out << "]\n";
  out << "}\n";
  write_text_file(out_model_path, out.str());

  info << "stddev cubic: c0=" << format_double(fit.coefficients[0])
       << " c1=" << format_double(fit.coefficients[1])
       << " c2=" << format_double(fit.coefficients[2])
       << " c3=" << format_double(fit.coefficients[3]) << "\n";
  info << "residual rms: " << format_double(fit.residual_rms) << " m over " << samples.size()
       << " samples\n";
  if (!bias.empty()) {
    info << "bias table: " << bias.size() << " points\n";
  }
  info << "model written to " << out_model_path << "\n";
}

MonteCarloReport run_montecarlo(const Scenario& sc, int n_runs, const HybridOptions& options) {
  if (n_runs < 1) {
    throw config_error("number of runs must be at least 1");
  }
  validate_scenario(sc);

  MonteCarloReport report;
  report.master_seed = sc.master_seed;
  std::vector<double> pooled_ble;
  std::vector<double> pooled_hybrid;

  for (int run = 0; run < n_runs; ++run) {
    Scenario run_sc = sc;
    run_sc.master_seed = derive_seed(sc.master_seed, static_cast<uint64_t>(run));

    const SimulationResult sim = run_scenario(run_sc);
    const auto ble_rows = localize_measurements(run_sc, sim.measurements, LocalizeMode::kBle, options);
    const auto hybrid_rows =
        localize_measurements(run_sc, sim.measurements, LocalizeMode::kHybrid, options);

    const ErrorSeries ble_traj =
        trajectory_errors(to_timed(ble_rows), run_sc.trajectory, MethodLabel::kBleOnly);
    const ErrorSeries hybrid_traj =
        trajectory_errors(to_timed(hybrid_rows), run_sc.trajectory, MethodLabel::kHybrid);

    MonteCarloRun r;
    r.seed = run_sc.master_seed;
    r.ble_median = cdf(ble_traj).median();
    r.hybrid_median = cdf(hybrid_traj).median();
    if (r.hybrid_median < r.ble_median) {
      ++report.hybrid_wins;
    }
    report.runs.push_back(r);

    for (const ErrorSample& s : ble_traj.samples) {
      pooled_ble.push_back(s.error);
    }
    for (const ErrorSample& s : hybrid_traj.samples) {
      pooled_hybrid.push_back(s.error);
    }
  }

  report.pooled_ble_median = EmpiricalCdf(std::move(pooled_ble)).median();
  report.pooled_hybrid_median = EmpiricalCdf(std::move(pooled_hybrid)).median();
  report.pooled_median_ratio = report.pooled_hybrid_median / report.pooled_ble_median;
  return report;
}

void cmd_montecarlo(const std::string& scenario_path, int n_runs,
                    const std::string& out_report_path, const RunOverrides& overrides) {
  const Scenario sc = load_scenario(scenario_path, overrides);
  HybridOptions options;
  options.fusion_feedback = overrides.fusion_feedback;
  const MonteCarloReport report = run_montecarlo(sc, n_runs, options);

  std::ostringstream out;
  out << "{\n";
  out << "  \"master_seed\": " << report.master_seed << ",\n";
  out << "  \"n_runs\": " << report.runs.size() << ",\n";
  out << "  \"hybrid_wins\": " << report.hybrid_wins << ",\n";
  out << "  \"pooled_ble_median_m\": " << format_double(report.pooled_ble_median) << ",\n";
  out << "  \"pooled_hybrid_median_m\": " << format_double(report.pooled_hybrid_median) << ",\n";
  out << "  \"pooled_median_ratio\": " << format_double(report.pooled_median_ratio) << ",\n";
  out << "  \"runs\": [\n";
  for (size_t i = 0; i < report.runs.size(); ++i) {
    const MonteCarloRun& r = report.runs[i];
    out << "    {\"seed\": " << r.seed << ", \"ble_median_m\": " << format_double(r.ble_median)
        << ", \"hybrid_median_m\": " << format_double(r.hybrid_median) << "}"
        << (i + 1 < report.runs.size() ? "," : "") << "\n";
  }
  out << "  ]\n";
  out << "}\n";
  write_text_file(out_report_path, out.str());
}

}  // namespace hybridloc
