#include "hybridloc/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "hybridloc/errors.hpp"

namespace hybridloc {

std::string format_double(double v) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

double parse_double(const std::string& field, const std::string& context) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, value);
  if (field.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(value)) {
    throw data_error(context + ": cannot parse '" + field + "' as a finite number");
  }
  return value;
}

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& msg) {
  throw data_error(origin + ": " + msg);
}

const json& require_field(const json& obj, const char* key, const std::string& origin) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    fail(origin, std::string("missing field '") + key + "'");
  }
  return *it;
}

double as_number(const json& v, const std::string& what, const std::string& origin) {
  if (!v.is_number()) {
    fail(origin, what + " must be a number");
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    fail(origin, what + " must be finite");
  }
  return d;
}

double number_field(const json& obj, const char* key, double fallback,
                    const std::string& origin) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : as_number(*it, std::string("'") + key + "'", origin);
}

std::string as_string(const json& v, const std::string& what, const std::string& origin) {
  if (!v.is_string()) {
    fail(origin, what + " must be a string");
  }
  return v.get<std::string>();
}

Point2 as_point(const json& v, const std::string& what, const std::string& origin) {
  if (!v.is_array() || v.size() != 2) {
    fail(origin, what + " must be a two-element array [x, y]");
  }
  return {as_number(v[0], what + "[0]", origin), as_number(v[1], what + "[1]", origin)};
}

Anchor parse_anchor(const json& v, size_t index, const std::string& origin) {
  const std::string what = "anchors[" + std::to_string(index) + "]";
  if (!v.is_object()) {
    fail(origin, what + " must be an object");
  }
  Anchor a;
  a.id = as_string(require_field(v, "id", origin), what + ".id", origin);
  a.position = as_point(require_field(v, "position", origin), what + ".position", origin);
  a.tx_ref_power_dbm = number_field(v, "tx_ref_power_dbm", a.tx_ref_power_dbm, origin);
  a.path_loss_exponent = number_field(v, "path_loss_exponent", a.path_loss_exponent, origin);
  a.rss_noise_stddev_db = number_field(v, "rss_noise_stddev_db", a.rss_noise_stddev_db, origin);
  return a;
}

SensorModel parse_sensor(const json& v, size_t index, const std::string& origin) {
  const std::string what = "sensors[" + std::to_string(index) + "]";
  if (!v.is_object()) {
    fail(origin, what + " must be an object");
  }
  SensorModel m;
  m.id = as_string(require_field(v, "id", origin), what + ".id", origin);
  m.position = as_point(require_field(v, "position", origin), what + ".position", origin);
  m.boresight = as_point(require_field(v, "boresight", origin), what + ".boresight", origin);
  m.fov_half_angle =
      as_number(require_field(v, "fov_half_angle_rad", origin), what + ".fov_half_angle_rad", origin);
  m.measured_fov_half_angle =
      number_field(v, "measured_fov_half_angle_rad", m.fov_half_angle, origin);
  m.max_range = number_field(v, "max_range_m", m.max_range, origin);
  if (const auto it = v.find("bias_curve"); it != v.end()) {
    if (!it->is_array()) {
      fail(origin, what + ".bias_curve must be an array");
    }
    m.bias_curve.clear();
    for (size_t i = 0; i < it->size(); ++i) {
      const json& p = (*it)[i];
      const std::string pwhat = what + ".bias_curve[" + std::to_string(i) + "]";
      if (!p.is_object()) {
        fail(origin, pwhat + " must be an object");
      }
      BiasPoint bp;
      bp.distance = as_number(require_field(p, "distance_m", origin), pwhat + ".distance_m", origin);
      bp.bias = as_number(require_field(p, "bias_m", origin), pwhat + ".bias_m", origin);
      m.bias_curve.push_back(bp);
    }
  }
  if (const auto it = v.find("stddev_cubic"); it != v.end()) {
    if (!it->is_array() || it->size() != 4) {
      fail(origin, what + ".stddev_cubic must be a four-element array [c0, c1, c2, c3]");
    }
    for (size_t i = 0; i < 4; ++i) {
      m.stddev_cubic[i] =
          as_number((*it)[i], what + ".stddev_cubic[" + std::to_string(i) + "]", origin);
    }
  }
  return m;
}

FilterSettings parse_filter(const json& v, const std::string& origin) {
  if (!v.is_object()) {
    fail(origin, "'filter' must be an object");
  }
  FilterSettings f;
  f.accel_psd = number_field(v, "accel_psd", f.accel_psd, origin);
  if (const auto it = v.find("init_position"); it != v.end() && !it->is_null()) {
    f.init_position = as_point(*it, "filter.init_position", origin);
  }
  f.init_position_var = number_field(v, "init_position_var", f.init_position_var, origin);
  f.init_velocity_var = number_field(v, "init_velocity_var", f.init_velocity_var, origin);
  return f;
}

// --- hand-rolled serializer: fixed key order, shortest round-trip numbers ---

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char hex[8];
          std::snprintf(hex, sizeof hex, "\\u%04x", c);
          out += hex;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string json_number(double v) {
  if (!std::isfinite(v)) {
    throw data_error("cannot serialize a non-finite number");
  }
  return format_double(v);
}

std::string json_point(const Point2& p) {
  return "[" + json_number(p.x) + ", " + json_number(p.y) + "]";
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& origin) {
  const json root = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded()) {
    fail(origin, "not valid JSON");
  }
  if (!root.is_object()) {
    fail(origin, "top level must be an object");
  }
  const json& ver = require_field(root, "format_version", origin);
  if (!ver.is_number_integer() || ver.get<int64_t>() != kScenarioFormatVersion) {
    fail(origin, "unsupported format_version (expected " +
                     std::to_string(kScenarioFormatVersion) + ")");
  }

  Scenario sc;
  sc.walk_speed = number_field(root, "walk_speed_mps", sc.walk_speed, origin);
  sc.tick_rate = number_field(root, "tick_rate_hz", sc.tick_rate, origin);
  if (const auto it = root.find("master_seed"); it != root.end()) {
    if (!it->is_number_unsigned()) {
      fail(origin, "'master_seed' must be a non-negative integer");
    }
    sc.master_seed = it->get<uint64_t>();
  }
  if (const auto it = root.find("fov_mode"); it != root.end()) {
    const std::string mode = as_string(*it, "'fov_mode'", origin);
    if (mode == "declared") {
      sc.fov_mode = FovMode::kDeclared;
    } else if (mode == "measured") {
      sc.fov_mode = FovMode::kMeasured;
    } else {
      fail(origin, "'fov_mode' must be \"declared\" or \"measured\", got \"" + mode + "\"");
    }
  }
  if (const auto it = root.find("filter"); it != root.end()) {
    sc.filter = parse_filter(*it, origin);
  }

  const json& anchors = require_field(root, "anchors", origin);
  if (!anchors.is_array()) {
    fail(origin, "'anchors' must be an array");
  }
  for (size_t i = 0; i < anchors.size(); ++i) {
    sc.anchors.push_back(parse_anchor(anchors[i], i, origin));
  }

  if (const auto it = root.find("sensors"); it != root.end()) {
    if (!it->is_array()) {
      fail(origin, "'sensors' must be an array");
    }
    for (size_t i = 0; i < it->size(); ++i) {
      sc.sensors.push_back(parse_sensor((*it)[i], i, origin));
    }
  }

  const json& traj = require_field(root, "trajectory", origin);
  if (!traj.is_array()) {
    fail(origin, "'trajectory' must be an array of [x, y] vertices");
  }
  for (size_t i = 0; i < traj.size(); ++i) {
    sc.trajectory.vertices.push_back(
        as_point(traj[i], "trajectory[" + std::to_string(i) + "]", origin));
  }
  return sc;
}

Scenario read_scenario_file(const std::string& path) {
  const Scenario sc = parse_scenario_text(read_text_file(path), path);
  validate_scenario(sc);
  return sc;
}

std::string scenario_to_text(const Scenario& sc) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"format_version\": " << kScenarioFormatVersion << ",\n";
  out << "  \"walk_speed_mps\": " << json_number(sc.walk_speed) << ",\n";
  out << "  \"tick_rate_hz\": " << json_number(sc.tick_rate) << ",\n";
  out << "  \"master_seed\": " << sc.master_seed << ",\n";
  out << "  \"fov_mode\": \"" << (sc.fov_mode == FovMode::kDeclared ? "declared" : "measured")
      << "\",\n";
  out << "  \"filter\": {\n";
  out << "    \"accel_psd\": " << json_number(sc.filter.accel_psd) << ",\n";
  out << "    \"init_position\": "
      << (sc.filter.init_position ? json_point(*sc.filter.init_position) : "null") << ",\n";
  out << "    \"init_position_var\": " << json_number(sc.filter.init_position_var) << ",\n";
  out << "    \"init_velocity_var\": " << json_number(sc.filter.init_velocity_var) << "\n";
  out << "  },\n";

  out << "  \"anchors\": [\n";
  for (size_t i = 0; i < sc.anchors.size(); ++i) {
    const Anchor& a = sc.anchors[i];
    out << "    {\n";
    out << "      \"id\": \"" << json_escape(a.id) << "\",\n";
    out << "      \"position\": " << json_point(a.position) << ",\n";
    out << "      \"tx_ref_power_dbm\": " << json_number(a.tx_ref_power_dbm) << ",\n";
    out << "      \"path_loss_exponent\": " << json_number(a.path_loss_exponent) << ",\n";
    out << "      \"rss_noise_stddev_db\": " << json_number(a.rss_noise_stddev_db) << "\n";
    out << "    }" << (i + 1 < sc.anchors.size() ? "," : "") << "\n";
  }
  out << "  ],\n";

  out << "  \"sensors\": [\n";
  for (size_t i = 0; i < sc.sensors.size(); ++i) {
    const SensorModel& m = sc.sensors[i];
    out << "    {\n";
    out << "      \"id\": \"" << json_escape(m.id) << "\",\n";
    out << "      \"position\": " << json_point(m.position) << ",\n";
    out << "      \"boresight\": " << json_point(m.boresight) << ",\n";
    out << "      \"fov_half_angle_rad\": " << json_number(m.fov_half_angle) << ",\n";
    out << "      \"measured_fov_half_angle_rad\": " << json_number(m.measured_fov_half_angle)
        << ",\n";
    out << "      \"max_range_m\": " << json_number(m.max_range) << ",\n";
    out << "      \"bias_curve\": [";
    for (size_t k = 0; k < m.bias_curve.size(); ++k) {
      out << (k == 0 ? "" : ", ") << "{\"distance_m\": " << json_number(m.bias_curve[k].distance)
          << ", \"bias_m\": " << json_number(m.bias_curve[k].bias) << "}";
    }
    out << "],\n";
    out << "      \"stddev_cubic\": [";
    for (size_t k = 0; k < m.stddev_cubic.size(); ++k) {
      out << (k == 0 ? "" : ", ") << json_number(m.stddev_cubic[k]);
    }
    out << "]\n";
    out << "    }" << (i + 1 < sc.sensors.size() ? "," : "") << "\n";
  }
  out << "  ],\n";

  out << "  \"trajectory\": [\n";
  const auto& vertices = sc.trajectory.vertices;
  for (size_t i = 0; i < vertices.size(); ++i) {
    out << "    " << json_point(vertices[i]) << (i + 1 < vertices.size() ? "," : "") << "\n";
  }
  out << "  ]\n";
  out << "}\n";
  return out.str();
}

void write_scenario_file(const std::string& path, const Scenario& sc) {
  write_text_file(path, scenario_to_text(sc));
}

// --- CSV plumbing ---

namespace {

/// Splits on sep, keeping empty fields (including a trailing one).
std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    const size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string row_context(const std::string& path, size_t row) {
  return path + " row " + std::to_string(row);
}

/// Reads all lines, requiring the exact expected header on line 1.
/// Returned lines exclude the header; row numbering in errors is 1-based
/// counting the header, so the first data row is row 2.
std::vector<std::string> read_csv_lines(const std::string& path, const std::string& header) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line)) {
    throw data_error(path + ": empty file, expected header '" + header + "'");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  if (line != header) {
    throw data_error(path + ": bad header '" + line + "', expected '" + header + "'");
  }
  std::vector<std::string> lines;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (!line.empty()) {
      lines.push_back(line);
    }
  }
  return lines;
}

void check_plain_id(const std::string& id, const std::string& what) {
  if (id.empty() || id.find_first_of(",;\n\r") != std::string::npos) {
    throw data_error(what + " '" + id + "' cannot be written to CSV (empty or contains , ; or newline)");
  }
}

const char* kind_name(MeasurementKind kind) {
  return kind == MeasurementKind::kRss ? "rss" : "range";
}

MeasurementKind kind_from(const std::string& name, const std::string& context) {
  if (name == "rss") {
    return MeasurementKind::kRss;
  }
  if (name == "range") {
    return MeasurementKind::kRange;
  }
  throw data_error(context + ": unknown measurement kind '" + name + "'");
}

}  // namespace

void write_measurement_log(const std::string& path, std::span<const Measurement> measurements) {
  std::ostringstream out;
  out << kMeasurementLogHeader << "\n";
  for (const Measurement& m : measurements) {
    check_plain_id(m.source_id, "source_id");
    out << format_double(m.timestamp) << ',' << m.source_id << ',' << kind_name(m.kind) << ','
        << format_double(m.value) << "\n";
  }
  write_text_file(path, out.str());
}

std::vector<Measurement> read_measurement_log(const std::string& path) {
  const auto lines = read_csv_lines(path, kMeasurementLogHeader);
  std::vector<Measurement> measurements;
  measurements.reserve(lines.size());
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string context = row_context(path, i + 2);
    const auto fields = split(lines[i], ',');
    if (fields.size() != 4) {
      throw data_error(context + ": expected 4 fields, got " + std::to_string(fields.size()));
    }
    Measurement m;
    m.timestamp = parse_double(fields[0], context);
    m.source_id = fields[1];
    if (m.source_id.empty()) {
      throw data_error(context + ": empty source_id");
    }
    m.kind = kind_from(fields[2], context);
    m.value = parse_double(fields[3], context);
    if (!measurements.empty() && m.timestamp < measurements.back().timestamp) {
      throw data_error(context + ": timestamp " + format_double(m.timestamp) +
                       " goes backwards (previous " +
                       format_double(measurements.back().timestamp) + ")");
    }
    measurements.push_back(std::move(m));
  }
  return measurements;
}

void write_ground_truth(const std::string& path, std::span<const GroundTruthSample> truth) {
  std::ostringstream out;
  out << kGroundTruthHeader << "\n";
  for (const GroundTruthSample& s : truth) {
    out << format_double(s.timestamp) << ',' << format_double(s.position.x) << ','
        << format_double(s.position.y) << "\n";
  }
  write_text_file(path, out.str());
}

std::vector<GroundTruthSample> read_ground_truth(const std::string& path) {
  const auto lines = read_csv_lines(path, kGroundTruthHeader);
  std::vector<GroundTruthSample> truth;
  truth.reserve(lines.size());
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string context = row_context(path, i + 2);
    const auto fields = split(lines[i], ',');
    if (fields.size() != 3) {
      throw data_error(context + ": expected 3 fields, got " + std::to_string(fields.size()));
    }
    GroundTruthSample s;
    s.timestamp = parse_double(fields[0], context);
    s.position = {parse_double(fields[1], context), parse_double(fields[2], context)};
    if (!truth.empty() && s.timestamp <= truth.back().timestamp) {
      throw data_error(context + ": timestamps must be strictly increasing");
    }
    truth.push_back(s);
  }
  return truth;
}

void write_estimates(const std::string& path, std::span<const EstimateRow> rows) {
  std::ostringstream out;
  out << kEstimatesHeader << "\n";
  for (const EstimateRow& r : rows) {
    if (r.mode != "ble" && r.mode != "hybrid") {
      throw data_error("estimate mode must be 'ble' or 'hybrid', got '" + r.mode + "'");
    }
    out << format_double(r.timestamp) << ',' << r.mode << ',' << format_double(r.position.x)
        << ',' << format_double(r.position.y) << ',' << format_double(r.var_x) << ','
        << format_double(r.var_y) << ',';
    for (size_t k = 0; k < r.detecting_sensor_ids.size(); ++k) {
      check_plain_id(r.detecting_sensor_ids[k], "sensor id");
      out << (k == 0 ? "" : ";") << r.detecting_sensor_ids[k];
    }
    out << "\n";
  }
  write_text_file(path, out.str());
}

std::vector<EstimateRow> read_estimates(const std::string& path) {
  const auto lines = read_csv_lines(path, kEstimatesHeader);
  std::vector<EstimateRow> rows;
  rows.reserve(lines.size());
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string context = row_context(path, i + 2);
    const auto fields = split(lines[i], ',');
    if (fields.size() != 7) {
      throw data_error(context + ": expected 7 fields, got " + std::to_string(fields.size()));
    }
    EstimateRow r;
    r.timestamp = parse_double(fields[0], context);
    r.mode = fields[1];
    if (r.mode != "ble" && r.mode != "hybrid") {
      throw data_error(context + ": mode must be 'ble' or 'hybrid', got '" + r.mode + "'");
    }
    r.position = {parse_double(fields[2], context), parse_double(fields[3], context)};
    r.var_x = parse_double(fields[4], context);
    r.var_y = parse_double(fields[5], context);
    if (r.var_x < 0.0 || r.var_y < 0.0) {
      throw data_error(context + ": variances must be non-negative");
    }
    if (!fields[6].empty()) {
      r.detecting_sensor_ids = split(fields[6], ';');
      for (const std::string& id : r.detecting_sensor_ids) {
        if (id.empty()) {
          throw data_error(context + ": empty sensor id in detecting_sensor_ids");
        }
      }
    }
    if (!rows.empty() && r.timestamp < rows.back().timestamp) {
      throw data_error(context + ": timestamp goes backwards");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<CalibrationSample> read_stddev_calibration(const std::string& path) {
  const auto lines = read_csv_lines(path, kStddevCalibrationHeader);
  std::vector<CalibrationSample> samples;
  samples.reserve(lines.size());
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string context = row_context(path, i + 2);
    const auto fields = split(lines[i], ',');
    if (fields.size() != 2) {
      throw data_error(context + ": expected 2 fields, got " + std::to_string(fields.size()));
    }
    CalibrationSample s;
    s.distance = parse_double(fields[0], context);
    s.stddev = parse_double(fields[1], context);
    if (s.distance <= 0.0) {
      throw data_error(context + ": distance must be positive");
    }
    if (s.stddev <= 0.0) {
      throw data_error(context + ": stddev must be positive");
    }
    samples.push_back(s);
  }
  return samples;
}

std::vector<BiasPoint> read_bias_calibration(const std::string& path) {
  const auto lines = read_csv_lines(path, kBiasCalibrationHeader);
  std::vector<BiasPoint> points;
  points.reserve(lines.size());
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string context = row_context(path, i + 2);
    const auto fields = split(lines[i], ',');
    if (fields.size() != 2) {
      throw data_error(context + ": expected 2 fields, got " + std::to_string(fields.size()));
    }
    BiasPoint p;
    p.distance = parse_double(fields[0], context);
    p.bias = parse_double(fields[1], context);
    if (p.distance <= 0.0) {
      throw data_error(context + ": distance must be positive");
    }
    if (!points.empty() && p.distance <= points.back().distance) {
      throw data_error(context + ": distances must be strictly increasing");
    }
    points.push_back(p);
  }
  return points;
}

void write_cdf_table(const std::string& path, const EmpiricalCdf& cdf) {
  std::ostringstream out;
  out << kCdfHeader << "\n";
  const auto& values = cdf.sorted_values();
  const auto n = static_cast<double>(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    out << format_double(values[i]) << ',' << format_double(static_cast<double>(i + 1) / n)
        << "\n";
  }
  write_text_file(path, out.str());
}

void write_error_table(const std::string& path, const ErrorSeries& trajectory,
                       const ErrorSeries& timesync) {
  if (trajectory.samples.size() != timesync.samples.size()) {
    throw data_error("error-table series have different lengths");
  }
  std::ostringstream out;
  out << kErrorTableHeader << "\n";
  for (size_t i = 0; i < trajectory.samples.size(); ++i) {
    if (trajectory.samples[i].timestamp != timesync.samples[i].timestamp) {
      throw data_error("error-table series disagree on timestamps at index " + std::to_string(i));
    }
    out << format_double(trajectory.samples[i].timestamp) << ','
        << format_double(trajectory.samples[i].error) << ','
        << format_double(timesync.samples[i].error) << "\n";
  }
  write_text_file(path, out.str());
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw io_error("cannot open '" + path + "' for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw io_error("failed while reading '" + path + "'");
  }
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw io_error("cannot open '" + path + "' for writing");
  }
  out << content;
  out.flush();
  if (!out.good()) {
    throw io_error("failed while writing '" + path + "'");
  }
}

}  // namespace hybridloc
