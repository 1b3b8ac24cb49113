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

#include "goalprobe/geom.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace goalprobe {

double normalize_angle(double radians) {
  double a = std::remainder(radians, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

double euclidean_distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

namespace {

std::array<Point2, 4> corners(const OrientedBox& box) {
  const Point2 u{std::cos(box.heading), std::sin(box.heading)};
  const Point2 v{-u.y, u.x};
  const Point2 hu = (0.5 * box.length) * u;
  const Point2 hv = (0.5 * box.width) * v;
  return {box.center + hu + hv, box.center - hu + hv, box.center - hu - hv, box.center + hu - hv};
}

// True when the projections of both corner sets onto `axis` are disjoint.
bool separated_on(Point2 axis, const std::array<Point2, 4>& ca, const std::array<Point2, 4>& cb) {
  double amin = std::numeric_limits<double>::infinity();
  double amax = -amin;
  double bmin = amin;
  double bmax = -amin;
  for (const Point2& c : ca) {
    const double p = dot(c, axis);
    amin = std::min(amin, p);
    amax = std::max(amax, p);
  }
  for (const Point2& c : cb) {
    const double p = dot(c, axis);
    bmin = std::min(bmin, p);
    bmax = std::max(bmax, p);
  }
  // Rounding slack so that boxes sharing an edge stay "touching".
  const double eps = 1e-12 * (1.0 + std::max({std::abs(amin), std::abs(amax), std::abs(bmin), std::abs(bmax)}));
  return amax < bmin - eps || bmax < amin - eps;
}

}  // namespace

bool boxes_overlap(const OrientedBox& a, const OrientedBox& b) {
  const auto ca = corners(a);
  const auto cb = corners(b);
  const std::array<Point2, 4> axes = {
      Point2{std::cos(a.heading), std::sin(a.heading)},
      Point2{-std::sin(a.heading), std::cos(a.heading)},
      Point2{std::cos(b.heading), std::sin(b.heading)},
      Point2{-std::sin(b.heading), std::cos(b.heading)},
  };
  for (const Point2& axis : axes) {
    if (separated_on(axis, ca, cb)) return false;
  }
  return true;
}

Polyline::Polyline(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) throw std::invalid_argument("polyline needs at least 2 vertices");
  cumulative_.reserve(vertices_.size());
  cumulative_.push_back(0.0);
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!std::isfinite(vertices_[i].x) || !std::isfinite(vertices_[i].y)) {
      throw std::invalid_argument("polyline vertex " + std::to_string(i) + " is not finite");
    }
    if (i == 0) continue;
    const double seg = euclidean_distance(vertices_[i - 1], vertices_[i]);
    if (!(seg > 0.0)) {
      throw std::invalid_argument("polyline vertices " + std::to_string(i - 1) + " and " + std::to_string(i) +
                                  " coincide");
    }
    cumulative_.push_back(cumulative_.back() + seg);
  }
}

PolylineProjection project_to_polyline(Point2 p, const Polyline& line) {
  const auto& v = line.vertices();
  PolylineProjection best;
  best.distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const Point2 a = v[i];
    const Point2 d = v[i + 1] - a;
    const double seg_len = line.arclength_at(i + 1) - line.arclength_at(i);
    const double t = std::clamp(dot(p - a, d) / (seg_len * seg_len), 0.0, 1.0);
    const Point2 foot = a + t * d;
    const double dist = euclidean_distance(p, foot);
    // Strict comparison keeps the earliest segment on ties.
    if (dist < best.distance) {
      best.distance = dist;
      best.segment_index = i;
      best.s = line.arclength_at(i) + t * seg_len;
      best.l = cross(d, p - a) / seg_len;
    }
  }
  // Beyond either end `l` is still the offset from the end segment's line;
  // the clamped residual is in `distance`.
  return best;
}

Pose2 point_at_arclength(const Polyline& line, double s, double l) {
  if (!(s >= 0.0 && s <= line.length())) {
    throw std::domain_error("arc length " + std::to_string(s) + " outside [0, " + std::to_string(line.length()) + "]");
  }
  const auto& v = line.vertices();
  std::size_t i = 0;
  while (i + 2 < v.size() && s > line.arclength_at(i + 1)) ++i;
  const double seg_len = line.arclength_at(i + 1) - line.arclength_at(i);
  const Point2 d = (1.0 / seg_len) * (v[i + 1] - v[i]);
  const Point2 normal{-d.y, d.x};
  const Point2 base = v[i] + (s - line.arclength_at(i)) * d;
  return Pose2{base + l * normal, std::atan2(d.y, d.x)};
}

}  // namespace goalprobe
