// Copyright (c) 2026 The strkit Authors. All Rights Reserved.
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

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace strkit::geometry {

/// Collinearity / degeneracy tolerance, in squared-pixel units.
inline constexpr double kEps = 1e-9;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point &, const Point &) = default;
};

inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }

/// Ordered vertex ring in pixel coordinates. The closing edge is implicit.
struct Polygon {
  std::vector<Point> vertices;

  friend bool operator==(const Polygon &, const Polygon &) = default;
};

struct AABB {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  bool contains(Point p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
  Polygon to_polygon() const;

  friend bool operator==(const AABB &, const AABB &) = default;
};

/// Oriented rectangle. `angle` is the direction of the width axis in degrees,
/// measured from +x towards +y, canonicalized to [-90, 90) with width >= height.
struct RotatedRect {
  Point center;
  double width = 0.0;
  double height = 0.0;
  double angle = 0.0;

  double area() const { return width * height; }
  /// Corners in order: (-w,-h), (+w,-h), (+w,+h), (-w,+h) in the local frame.
  std::vector<Point> corners() const;
};

/// Signed shoelace area; positive for counter-clockwise in a y-up frame.
double signed_area(std::span<const Point> ring);

/// Absolute area. Throws GeometryError when the ring has fewer than three
/// vertices or its area is within kEps of zero.
double polygon_area(const Polygon &p);

bool segments_intersect(Point a, Point b, Point c, Point d);

/// True when no two non-adjacent edges touch and no adjacent edges overlap.
bool is_simple(const Polygon &p);

bool is_convex(const Polygon &p);

/// Human-readable reasons the polygon is invalid; empty when valid.
std::vector<std::string> polygon_violations(const Polygon &p,
                                            bool require_simple = true);

/// Andrew's monotone chain. Counter-clockwise, collinear points dropped.
/// Throws GeometryError when all points are collinear.
Polygon convex_hull(std::span<const Point> points);

AABB min_aabb(std::span<const Polygon> polys);
AABB min_aabb(const Polygon &p);

/// Minimum-area enclosing rectangle (rotating calipers over the hull).
RotatedRect min_rotated_rect(const Polygon &p);

/// Canonicalizes width >= height and angle in [-90, 90).
RotatedRect canonical(RotatedRect r);

/// Intersection of two convex polygons (half-plane clipping). The result may
/// have fewer than three vertices when the inputs do not overlap.
std::vector<Point> clip_convex(const Polygon &subject, const Polygon &clip);

/// Intersection-over-union. Non-convex inputs are replaced by their hulls.
double polygon_iou(const Polygon &a, const Polygon &b);

/// Height at least twice the width of the polygon's bounding box, and a label
/// longer than one character.
bool is_vertical_instance(const Polygon &p, std::string_view label);

}  // namespace strkit::geometry
