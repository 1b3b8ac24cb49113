// Copyright 2026 The goalprobe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GOALPROBE_GEOM_HPP_
#define GOALPROBE_GEOM_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace goalprobe {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double k, Point2 a) { return {k * a.x, k * a.y}; }
  friend constexpr bool operator==(Point2 a, Point2 b) = default;
};

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }

/// Wraps an angle into (-pi, pi].
double normalize_angle(double radians);

struct Pose2 {
  Point2 position;
  double heading = 0.0;  // (-pi, pi]
};

/// Vehicle footprint. `length` runs along `heading`.
struct OrientedBox {
  Point2 center;
  double heading = 0.0;
  double length = 1.0;
  double width = 1.0;
};

double euclidean_distance(Point2 a, Point2 b);

/// Separating-axis test over the four face normals. Closed rectangles: a
/// shared edge or corner counts as overlap.
bool boxes_overlap(const OrientedBox& a, const OrientedBox& b);

struct PolylineProjection {
  double s = 0.0;  // arc length along the line
  double l = 0.0;  // signed lateral offset, positive to the left
  std::size_t segment_index = 0;
  double distance = 0.0;  // unsigned Euclidean distance to the curve
};

/// Piecewise-linear curve with precomputed cumulative arc length.
class Polyline {
 public:
  /// Throws std::invalid_argument for fewer than two vertices, repeated
  /// consecutive vertices, or non-finite coordinates.
  explicit Polyline(std::vector<Point2> vertices);

  const std::vector<Point2>& vertices() const { return vertices_; }
  double length() const { return cumulative_.back(); }
  /// Arc length at vertex `i`.
  double arclength_at(std::size_t i) const { return cumulative_[i]; }
  std::size_t segment_count() const { return vertices_.size() - 1; }

  friend bool operator==(const Polyline& a, const Polyline& b) { return a.vertices_ == b.vertices_; }

 private:
  std::vector<Point2> vertices_;
  std::vector<double> cumulative_;
};

/// Closest point on the curve. Points beyond either end clamp to the end
/// vertex; ties go to the lowest segment index.
PolylineProjection project_to_polyline(Point2 p, const Polyline& line);

/// Pose at arc length `s`, offset `l` along the left normal. Heading is the
/// tangent of the segment containing `s` (the earlier one at an interior
/// vertex). Throws std::domain_error when `s` is outside [0, length].
Pose2 point_at_arclength(const Polyline& line, double s, double l);

}  // namespace goalprobe

#endif  // GOALPROBE_GEOM_HPP_
