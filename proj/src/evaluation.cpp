#include "hybridloc/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hybridloc/errors.hpp"

namespace hybridloc {

const char* method_label_name(MethodLabel label) {
  return label == MethodLabel::kBleOnly ? "BLE_ONLY" : "HYBRID";
}

ErrorSeries trajectory_errors(std::span<const TimedPosition> estimates,
                              const Polyline& reference, MethodLabel label) {
  if (estimates.empty()) {
    throw data_error("cannot score an empty estimate sequence");
  }
  validate_polyline(reference);
  ErrorSeries series;
  series.label = label;
  series.samples.reserve(estimates.size());
  for (const auto& e : estimates) {
    series.samples.push_back({e.timestamp, distance_to_polyline(e.position, reference)});
  }
  return series;
}

ErrorSeries timesync_errors(std::span<const TimedPosition> estimates,
                            std::span<const TimedPosition> truth, MethodLabel label) {
  if (estimates.empty()) {
    throw data_error("cannot score an empty estimate sequence");
  }
  ErrorSeries series;
  series.label = label;
  series.samples.reserve(estimates.size());
  for (const auto& e : estimates) {
    const TimedPosition* match = nullptr;
    for (const auto& t : truth) {
      if (t.timestamp == e.timestamp) {
        match = &t;
        break;
      }
    }
    if (match == nullptr) {
      throw data_error("no ground-truth sample at t=" + std::to_string(e.timestamp));
    }
    series.samples.push_back({e.timestamp, distance(e.position, match->position)});
  }
  return series;
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> values) : sorted_(std::move(values)) {
  if (sorted_.empty()) {
    throw data_error("empirical CDF needs at least one value");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::evaluate(double t) const {
  const auto upper = std::upper_bound(sorted_.begin(), sorted_.end(), t);
  return static_cast<double>(upper - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::median() const {
  const size_t n = sorted_.size();
  if (n % 2 == 1) {
    return sorted_[n / 2];
  }
  return 0.5 * (sorted_[n / 2 - 1] + sorted_[n / 2]);
}

double EmpiricalCdf::quantile(double p) const {
  if (!(p > 0.0) || p > 1.0) {
    throw range_error("quantile probability must be in (0, 1]");
  }
  const size_t n = sorted_.size();
  const auto rank = static_cast<size_t>(
      std::ceil(p * static_cast<double>(n)));
  return sorted_[std::min(rank, n) - 1];
}

double EmpiricalCdf::mean() const {
  return std::accumulate(sorted_.begin(), sorted_.end(), 0.0) /
         static_cast<double>(sorted_.size());
}

EmpiricalCdf cdf(const ErrorSeries& series) {
  std::vector<double> values;
  values.reserve(series.samples.size());
  for (const auto& s : series.samples) {
    values.push_back(s.error);
  }
  return EmpiricalCdf(std::move(values));
}

namespace {

MethodSummary summarize_one(const ErrorSeries& series) {
  const EmpiricalCdf dist = cdf(series);
  return {dist.median(), dist.quantile(0.9), dist.mean(), dist.size()};
}

}  // namespace

Summary summarize(const ErrorSeries& ble, const ErrorSeries& hybrid) {
  Summary summary;
  summary.ble = summarize_one(ble);
  summary.hybrid = summarize_one(hybrid);
  summary.median_ratio_hybrid_over_ble = summary.hybrid.median / summary.ble.median;
  return summary;
}

}  // namespace hybridloc
