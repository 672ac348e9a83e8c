#include "hybridloc/geometry.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "hybridloc/errors.hpp"

namespace hybridloc {

double polyline_length(const Polyline& line) {
  double total = 0.0;
  for (size_t i = 1; i < line.vertices.size(); ++i) {
    total += distance(line.vertices[i - 1], line.vertices[i]);
  }
  return total;
}

void validate_polyline(const Polyline& line) {
  if (line.vertices.size() < 2) {
    throw config_error("polyline needs at least 2 vertices, got " +
                       std::to_string(line.vertices.size()));
  }
  for (size_t i = 0; i < line.vertices.size(); ++i) {
    if (!is_finite(line.vertices[i])) {
      throw config_error("polyline vertex " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && distance(line.vertices[i - 1], line.vertices[i]) <= 0.0) {
      throw config_error("polyline segment " + std::to_string(i - 1) +
                         " has zero length");
    }
  }
}

double point_segment_distance(const Point2& p, const Point2& a, const Point2& b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) {
    return distance(p, a);
  }
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

double distance_to_polyline(const Point2& p, const Polyline& line) {
  validate_polyline(line);
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < line.vertices.size(); ++i) {
    best = std::min(best, point_segment_distance(p, line.vertices[i - 1], line.vertices[i]));
  }
  return best;
}

}  // namespace hybridloc
