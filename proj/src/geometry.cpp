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

#include "strkit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "strkit/error.hpp"
#include "strkit/text.hpp"

namespace strkit::geometry {

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

double orient(Point a, Point b, Point c) { return cross(b - a, c - a); }

bool on_segment(Point a, Point b, Point p) {
  return std::min(a.x, b.x) - kEps <= p.x && p.x <= std::max(a.x, b.x) + kEps &&
         std::min(a.y, b.y) - kEps <= p.y && p.y <= std::max(a.y, b.y) + kEps;
}

int sign(double v) { return v > kEps ? 1 : (v < -kEps ? -1 : 0); }

std::vector<Point> ccw_ring(const Polygon &p) {
  std::vector<Point> ring = p.vertices;
  if (signed_area(ring) < 0) std::reverse(ring.begin(), ring.end());
  return ring;
}

double normalize_angle(double deg) {
  double a = std::fmod(deg + 90.0, 180.0);
  if (a < 0) a += 180.0;
  return a - 90.0;
}

}  // namespace

Polygon AABB::to_polygon() const {
  return Polygon{{{x_min, y_min}, {x_max, y_min}, {x_max, y_max}, {x_min, y_max}}};
}

std::vector<Point> RotatedRect::corners() const {
  const double rad = angle / kDegPerRad;
  const Point ew{std::cos(rad), std::sin(rad)};
  const Point eh{-ew.y, ew.x};
  const double hw = width / 2.0;
  const double hh = height / 2.0;
  return {center + (-hw) * ew + (-hh) * eh, center + hw * ew + (-hh) * eh,
          center + hw * ew + hh * eh, center + (-hw) * ew + hh * eh};
}

double signed_area(std::span<const Point> ring) {
  if (ring.size() < 3) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point &a = ring[i];
    const Point &b = ring[(i + 1) % ring.size()];
    acc += a.x * b.y - b.x * a.y;
  }
  return acc / 2.0;
}

double polygon_area(const Polygon &p) {
  if (p.vertices.size() < 3) {
    throw GeometryError("polygon needs at least 3 vertices, got " +
                        std::to_string(p.vertices.size()));
  }
  const double a = std::abs(signed_area(p.vertices));
  if (a <= kEps) throw GeometryError("degenerate polygon with zero area");
  return a;
}

bool segments_intersect(Point a, Point b, Point c, Point d) {
  const int o1 = sign(orient(a, b, c));
  const int o2 = sign(orient(a, b, d));
  const int o3 = sign(orient(c, d, a));
  const int o4 = sign(orient(c, d, b));
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

bool is_simple(const Polygon &p) {
  const auto &v = p.vertices;
  const std::size_t n = v.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] == v[(i + 1) % n]) return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = v[i];
    const Point b = v[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point c = v[j];
      const Point d = v[(j + 1) % n];
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) {
        // Adjacent edges share one vertex; they must not fold back on each
        // other.
        const Point shared = (j == i + 1) ? b : a;
        const Point other_i = (j == i + 1) ? a : b;
        const Point other_j = (j == i + 1) ? d : c;
        if (sign(orient(other_i, shared, other_j)) == 0 &&
            dot(other_i - shared, other_j - shared) > 0) {
          return false;
        }
        continue;
      }
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

bool is_convex(const Polygon &p) {
  const auto &v = p.vertices;
  const std::size_t n = v.size();
  if (n < 3) return false;
  int dir = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int s = sign(orient(v[i], v[(i + 1) % n], v[(i + 2) % n]));
    if (s == 0) continue;
    if (dir == 0) dir = s;
    if (s != dir) return false;
  }
  return dir != 0 && is_simple(p);
}

std::vector<std::string> polygon_violations(const Polygon &p,
                                            bool require_simple) {
  std::vector<std::string> out;
  if (p.vertices.size() < 3) {
    out.push_back("needs at least 3 vertices, has " +
                  std::to_string(p.vertices.size()));
    return out;
  }
  for (const Point &q : p.vertices) {
    if (!std::isfinite(q.x) || !std::isfinite(q.y)) {
      out.emplace_back("non-finite coordinate");
      return out;
    }
  }
  if (require_simple && !is_simple(p)) out.emplace_back("self-intersecting");
  if (std::abs(signed_area(p.vertices)) <= kEps) out.emplace_back("zero area");
  return out;
}

Polygon convex_hull(std::span<const Point> points) {
  std::vector<Point> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) throw GeometryError("convex hull needs 3 distinct points");

  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point &p : pts) {
    while (k >= 2 && orient(hull[k - 2], hull[k - 1], p) <= kEps) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    const Point &p = pts[i];
    while (k >= lower && orient(hull[k - 2], hull[k - 1], p) <= kEps) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  if (hull.size() < 3 || std::abs(signed_area(hull)) <= kEps) {
    throw GeometryError("convex hull of collinear points");
  }
  return Polygon{std::move(hull)};
}

AABB min_aabb(std::span<const Polygon> polys) {
  if (polys.empty()) throw GeometryError("min_aabb of empty polygon list");
  AABB box{std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity()};
  bool any = false;
  for (const Polygon &poly : polys) {
    for (const Point &p : poly.vertices) {
      box.x_min = std::min(box.x_min, p.x);
      box.y_min = std::min(box.y_min, p.y);
      box.x_max = std::max(box.x_max, p.x);
      box.y_max = std::max(box.y_max, p.y);
      any = true;
    }
  }
  if (!any) throw GeometryError("min_aabb of polygons without vertices");
  return box;
}

AABB min_aabb(const Polygon &p) { return min_aabb(std::span<const Polygon>(&p, 1)); }

RotatedRect canonical(RotatedRect r) {
  if (r.height > r.width) {
    std::swap(r.width, r.height);
    r.angle += 90.0;
  }
  r.angle = normalize_angle(r.angle);
  return r;
}

RotatedRect min_rotated_rect(const Polygon &p) {
  polygon_area(p);
  const Polygon hull = convex_hull(p.vertices);
  const auto &h = hull.vertices;
  const std::size_t n = h.size();
  auto at = [&](std::size_t i) -> const Point & { return h[i % n]; };

  RotatedRect best;
  double best_area = std::numeric_limits<double>::infinity();
  // k: farthest along the edge direction, j: farthest from the edge,
  // l: farthest against the edge direction. All three advance monotonically.
  std::size_t j = 1;
  std::size_t k = 1;
  std::size_t l = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const Point edge = at(i + 1) - at(i);
    const double len = std::hypot(edge.x, edge.y);
    const Point u{edge.x / len, edge.y / len};
    const Point nrm{-u.y, u.x};

    k = std::max(k, i + 1);
    while (k < i + n && dot(u, at(k + 1) - at(k)) > 0) ++k;
    j = std::max(j, k);
    while (j < i + 2 * n && dot(nrm, at(j + 1) - at(j)) > 0) ++j;
    l = std::max(l, j);
    while (l < i + 2 * n && dot(u, at(l + 1) - at(l)) < 0) ++l;

    const Point origin = at(i);
    const double far = dot(u, at(k) - origin);
    const double near = dot(u, at(l) - origin);
    const double height = dot(nrm, at(j) - origin);
    const double width = far - near;
    const double area = width * height;

    RotatedRect cand;
    cand.center = origin + ((far + near) / 2.0) * u + (height / 2.0) * nrm;
    cand.width = width;
    cand.height = height;
    cand.angle = std::atan2(u.y, u.x) * kDegPerRad;
    cand = canonical(cand);

    const double tol = 1e-12 * std::max(1.0, area);
    if (i == 0 || area < best_area - tol ||
        (area <= best_area + tol && std::abs(cand.angle) < std::abs(best.angle))) {
      best_area = std::min(best_area, area);
      best = cand;
    }
  }
  return best;
}

std::vector<Point> clip_convex(const Polygon &subject, const Polygon &clip) {
  std::vector<Point> out = ccw_ring(subject);
  const std::vector<Point> c = ccw_ring(clip);
  for (std::size_t e = 0; e < c.size() && !out.empty(); ++e) {
    const Point a = c[e];
    const Point b = c[(e + 1) % c.size()];
    const Point dir = b - a;
    std::vector<Point> in = std::move(out);
    out.clear();
    for (std::size_t i = 0; i < in.size(); ++i) {
      const Point p = in[i];
      const Point q = in[(i + 1) % in.size()];
      const double sp = cross(dir, p - a);
      const double sq = cross(dir, q - a);
      if (sp >= 0) out.push_back(p);
      if ((sp >= 0) != (sq >= 0)) {
        const double t = sp / (sp - sq);
        out.push_back(p + t * (q - p));
      }
    }
  }
  return out;
}

double polygon_iou(const Polygon &a, const Polygon &b) {
  const Polygon ca = is_convex(a) ? a : convex_hull(a.vertices);
  const Polygon cb = is_convex(b) ? b : convex_hull(b.vertices);
  const double area_a = polygon_area(ca);
  const double area_b = polygon_area(cb);
  const std::vector<Point> inter = clip_convex(ca, cb);
  const double inter_area = std::abs(signed_area(inter));
  const double uni = area_a + area_b - inter_area;
  if (uni <= kEps) return 0.0;
  return std::clamp(inter_area / uni, 0.0, 1.0);
}

bool is_vertical_instance(const Polygon &p, std::string_view label) {
  const AABB box = min_aabb(p);
  return box.height() >= 2.0 * box.width() && text::length(label) > 1;
}

}  // namespace strkit::geometry
