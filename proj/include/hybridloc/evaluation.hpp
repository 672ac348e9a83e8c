#ifndef HYBRIDLOC_EVALUATION_HPP_
#define HYBRIDLOC_EVALUATION_HPP_

#include <span>
#include <string>
#include <vector>

#include "hybridloc/geometry.hpp"

namespace hybridloc {

enum class MethodLabel { kBleOnly, kHybrid };

const char* method_label_name(MethodLabel label);

struct TimedPosition {
  double timestamp = 0.0;
  Point2 position;
};

struct ErrorSample {
  double timestamp = 0.0;
  double error = 0.0;  // meters, >= 0
};

struct ErrorSeries {
  MethodLabel label = MethodLabel::kBleOnly;
  std::vector<ErrorSample> samples;
};

/// Distance of every estimate from the reference chain. This matches how the
/// experiment scores a walk: deviation from the path, not from the
/// time-synchronized true position.
ErrorSeries trajectory_errors(std::span<const TimedPosition> estimates,
                              const Polyline& reference, MethodLabel label);

/// Stricter secondary metric: distance to the true position of the same
/// timestamp. Estimates lacking a truth sample raise a data error.
ErrorSeries timesync_errors(std::span<const TimedPosition> estimates,
                            std::span<const TimedPosition> truth, MethodLabel label);

/// Empirical distribution of an error series.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> values);  // sorts; empty input raises

  /// F(t) = (#errors <= t) / n.
  double evaluate(double t) const;

  /// Median: central order statistic; midpoint of the two central order
  /// statistics for even n.
  double median() const;

  /// Nearest-rank quantile, p in (0, 1].
  double quantile(double p) const;

  double mean() const;
  const std::vector<double>& sorted_values() const { return sorted_; }
  size_t size() const { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

EmpiricalCdf cdf(const ErrorSeries& series);

struct MethodSummary {
  double median = 0.0;
  double p90 = 0.0;
  double mean = 0.0;
  size_t count = 0;
};

struct Summary {
  MethodSummary ble;
  MethodSummary hybrid;
  double median_ratio_hybrid_over_ble = 0.0;
};

/// Summary statistics of the two methods plus the hybrid/BLE median ratio.
Summary summarize(const ErrorSeries& ble, const ErrorSeries& hybrid);

}  // namespace hybridloc

#endif  // HYBRIDLOC_EVALUATION_HPP_
