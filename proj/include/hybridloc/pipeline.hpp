#ifndef HYBRIDLOC_PIPELINE_HPP_
#define HYBRIDLOC_PIPELINE_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hybridloc/evaluation.hpp"
#include "hybridloc/fusion.hpp"
#include "hybridloc/io.hpp"
#include "hybridloc/scenario.hpp"

namespace hybridloc {

enum class LocalizeMode { kBle, kHybrid };

const char* localize_mode_name(LocalizeMode mode);

/// Run the tracker over a time-sorted measurement stream, one hybrid step per
/// distinct timestamp. kBle drops range returns so the output is the pure
/// radio track.
std::vector<EstimateRow> localize_measurements(const Scenario& sc,
                                               std::span<const Measurement> measurements,
                                               LocalizeMode mode,
                                               const HybridOptions& options = {});

/// Flag overrides shared by the commands (--seed, --fov-mode,
/// --fusion-feedback).
struct RunOverrides {
  std::optional<uint64_t> seed;
  std::optional<FovMode> fov_mode;
  bool fusion_feedback = false;
};

Scenario load_scenario(const std::string& path, const RunOverrides& overrides);

// Command bodies behind the CLI. They throw hybridloc::Error; the CLI maps
// that to a nonzero exit with the stable code name on stderr.

void cmd_simulate(const std::string& scenario_path, const std::string& out_log_path,
                  const std::string& out_truth_path, const RunOverrides& overrides = {});

void cmd_localize(const std::string& scenario_path, const std::string& log_path,
                  const std::string& out_estimates_path, LocalizeMode mode,
                  const RunOverrides& overrides = {});

struct EvaluateArgs {
  std::string ble_estimates_path;
  std::string hybrid_estimates_path;
  std::string scenario_path;
  std::string out_report_path;
  // Derived from out_report_path when empty: <report stem>_cdf_ble.csv, ...
  std::string out_cdf_ble_path;
  std::string out_cdf_hybrid_path;
  std::string out_errors_ble_path;
  std::string out_errors_hybrid_path;
};

void cmd_evaluate(const EvaluateArgs& args, const RunOverrides& overrides = {});

void cmd_fit_sensor(const std::string& calibration_csv_path,
                    const std::optional<std::string>& bias_csv_path,
                    const std::string& out_model_path, std::ostream& info);

/// Per-run result of the Monte-Carlo wrapper.
struct MonteCarloRun {
  uint64_t seed = 0;
  double ble_median = 0.0;
  double hybrid_median = 0.0;
};

struct MonteCarloReport {
  uint64_t master_seed = 0;
  std::vector<MonteCarloRun> runs;
  int hybrid_wins = 0;
  double pooled_ble_median = 0.0;
  double pooled_hybrid_median = 0.0;
  double pooled_median_ratio = 0.0;
};

/// simulate + localize (both modes) + evaluate for n_runs derived seeds.
MonteCarloReport run_montecarlo(const Scenario& sc, int n_runs,
                                const HybridOptions& options = {});

void cmd_montecarlo(const std::string& scenario_path, int n_runs,
                    const std::string& out_report_path, const RunOverrides& overrides = {});

}  // namespace hybridloc

#endif  // HYBRIDLOC_PIPELINE_HPP_
