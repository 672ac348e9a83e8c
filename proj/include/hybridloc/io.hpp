#ifndef HYBRIDLOC_IO_HPP_
#define HYBRIDLOC_IO_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hybridloc/evaluation.hpp"
#include "hybridloc/measurement.hpp"
#include "hybridloc/proximity.hpp"
#include "hybridloc/scenario.hpp"
#include "hybridloc/simulator.hpp"

namespace hybridloc {

/// Shortest decimal form that parses back to the identical double. All file
/// formats use this so pipelines composed from files match in-memory
/// pipelines bit for bit.
std::string format_double(double v);

/// Strict double parse of a whole field; context names the file location for
/// the error message.
double parse_double(const std::string& field, const std::string& context);

// --- scenario files (JSON, documented in README) ---

inline constexpr int kScenarioFormatVersion = 1;

Scenario parse_scenario_text(const std::string& text, const std::string& origin);
Scenario read_scenario_file(const std::string& path);
std::string scenario_to_text(const Scenario& sc);
void write_scenario_file(const std::string& path, const Scenario& sc);

// --- measurement logs (CSV) ---

inline constexpr const char* kMeasurementLogHeader = "timestamp_s,source_id,kind,value_dbm_or_m";

void write_measurement_log(const std::string& path, std::span<const Measurement> measurements);
/// Rejects bad headers, malformed rows and timestamp regressions, naming the
/// 1-based file row.
std::vector<Measurement> read_measurement_log(const std::string& path);

// --- ground truth (CSV) ---

inline constexpr const char* kGroundTruthHeader = "timestamp_s,x_m,y_m";

void write_ground_truth(const std::string& path, std::span<const GroundTruthSample> truth);
std::vector<GroundTruthSample> read_ground_truth(const std::string& path);

// --- per-tick estimates (CSV) ---

inline constexpr const char* kEstimatesHeader =
    "timestamp_s,mode,x_m,y_m,var_x_m2,var_y_m2,detecting_sensor_ids";

/// One output row of the localization stage. detecting_sensor_ids is empty
/// for radio-only rows; in the file the ids are joined with ';'.
struct EstimateRow {
  double timestamp = 0.0;
  std::string mode;  // "ble" | "hybrid"
  Point2 position;
  double var_x = 0.0;
  double var_y = 0.0;
  std::vector<std::string> detecting_sensor_ids;

  friend bool operator==(const EstimateRow&, const EstimateRow&) = default;
};

void write_estimates(const std::string& path, std::span<const EstimateRow> rows);
std::vector<EstimateRow> read_estimates(const std::string& path);

// --- sensor calibration inputs (CSV) ---

inline constexpr const char* kStddevCalibrationHeader = "distance_m,stddev_m";
inline constexpr const char* kBiasCalibrationHeader = "distance_m,bias_m";

std::vector<CalibrationSample> read_stddev_calibration(const std::string& path);
std::vector<BiasPoint> read_bias_calibration(const std::string& path);

// --- evaluation outputs ---

inline constexpr const char* kCdfHeader = "error_m,cdf";
inline constexpr const char* kErrorTableHeader = "timestamp_s,trajectory_error_m,timesync_error_m";

void write_cdf_table(const std::string& path, const EmpiricalCdf& cdf);

/// Per-tick error table; the time-synchronized column is the secondary
/// metric, useful for filter tuning.
void write_error_table(const std::string& path, const ErrorSeries& trajectory,
                       const ErrorSeries& timesync);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace hybridloc

#endif  // HYBRIDLOC_IO_HPP_
