#ifndef HYBRIDLOC_GEOMETRY_HPP_
#define HYBRIDLOC_GEOMETRY_HPP_

#include <cmath>
#include <vector>

namespace hybridloc {

/// Planar position in meters.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(const Point2& a, const Point2& b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(const Point2& a, const Point2& b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, const Point2& p) { return {s * p.x, s * p.y}; }
  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline double norm(const Point2& p) { return std::hypot(p.x, p.y); }
inline double distance(const Point2& a, const Point2& b) { return norm(a - b); }
inline bool is_finite(const Point2& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Open polygonal chain; vertices in walk order.
struct Polyline {
  std::vector<Point2> vertices;

  friend bool operator==(const Polyline&, const Polyline&) = default;
};

/// Total arc length of the chain.
double polyline_length(const Polyline& line);

/// Throws a config error unless the chain has >= 2 vertices, all finite,
/// with no zero-length segment.
void validate_polyline(const Polyline& line);

double point_segment_distance(const Point2& p, const Point2& a, const Point2& b);

/// Minimum Euclidean distance from p to any segment of the chain.
double distance_to_polyline(const Point2& p, const Polyline& line);

}  // namespace hybridloc

#endif  // HYBRIDLOC_GEOMETRY_HPP_
