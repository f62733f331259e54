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

#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "oracles.hpp"
#include "strkit/error.hpp"
#include "strkit/geometry.hpp"

using namespace strkit;
using namespace strkit::geometry;

namespace {

std::set<std::pair<double, double>> vertex_set(const Polygon &p) {
  std::set<std::pair<double, double>> s;
  for (Point v : p.vertices) s.insert({v.x, v.y});
  return s;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("polygon_area") {
    CHECK(polygon_area(th::rect(0, 0, 1, 1)) == doctest::Approx(1.0));
    CHECK(polygon_area(Polygon{{{0, 0}, {4, 0}, {0, 3}}}) == doctest::Approx(6.0));
    CHECK(polygon_area(Polygon{{{0, 0}, {0, 1}, {1, 1}, {1, 0}}}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(polygon_area(Polygon{{{0, 0}, {1, 1}, {2, 2}}}), GeometryError);
    CHECK_THROWS_AS(polygon_area(Polygon{{{0, 0}, {1, 1}}}), GeometryError);
  }

  TEST_CASE("convex_hull examples") {
    const std::vector<Point> pts{{0, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 1}};
    const Polygon h = convex_hull(pts);
    CHECK(h.vertices.size() == 4);
    CHECK(vertex_set(h) == vertex_set(th::rect(0, 0, 2, 2)));
    CHECK(signed_area(h.vertices) > 0);
    const std::vector<Point> line{{0, 0}, {1, 1}, {2, 2}};
    CHECK_THROWS_AS(convex_hull(line), GeometryError);
  }

  TEST_CASE("convex_hull matches the brute-force hull") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int trial = 0; trial < 1000; ++trial) {
      const int n = trial == 0 ? 20 : 3 + trial % 30;
      std::vector<Point> pts;
      for (int i = 0; i < n; ++i) pts.push_back({u(rng), u(rng)});
      const Polygon h = convex_hull(pts);
      REQUIRE(vertex_set(h) == oracle::brute_hull(pts));
      CHECK(is_convex(h));
      CHECK(signed_area(h.vertices) > 0);
    }
  }

  TEST_CASE("min_aabb") {
    CHECK(min_aabb(th::rect(0, 0, 1, 1)) == AABB{0, 0, 1, 1});
    CHECK(min_aabb(Polygon{{{0, 0}, {4, 0}, {2, 3}}}) == AABB{0, 0, 4, 3});
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 100);
    std::vector<Polygon> quads;
    for (int k = 0; k < 3; ++k) {
      quads.push_back(Polygon{{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}}});
    }
    double x0 = 1e9, y0 = 1e9, x1 = -1e9, y1 = -1e9;
    for (const auto &q : quads) {
      for (Point v : q.vertices) {
        x0 = std::min(x0, v.x);
        y0 = std::min(y0, v.y);
        x1 = std::max(x1, v.x);
        y1 = std::max(y1, v.y);
      }
    }
    CHECK(min_aabb(quads) == AABB{x0, y0, x1, y1});
    CHECK_THROWS(min_aabb(std::span<const Polygon>{}));
  }

  TEST_CASE("min_rotated_rect examples") {
    const RotatedRect r = min_rotated_rect(th::rect(0, 0, 1, 1));
    CHECK(r.center.x == doctest::Approx(0.5));
    CHECK(r.center.y == doctest::Approx(0.5));
    CHECK(r.width == doctest::Approx(1.0));
    CHECK(r.height == doctest::Approx(1.0));
    CHECK(r.angle == doctest::Approx(0.0));

    const Polygon diamond{{{1, 0}, {2, 1}, {1, 2}, {0, 1}}};
    const RotatedRect d = min_rotated_rect(diamond);
    CHECK(d.area() == doctest::Approx(2.0));
    CHECK(d.width == doctest::Approx(std::sqrt(2.0)));
    CHECK(d.height == doctest::Approx(std::sqrt(2.0)));
    CHECK(std::abs(d.area() - oracle::sweep_min_rect_area(diamond)) <= 1e-6);
  }

  TEST_CASE("min_rotated_rect canonical form") {
    const RotatedRect r = min_rotated_rect(th::rect(0, 0, 2, 10));
    CHECK(r.width == doctest::Approx(10));
    CHECK(r.height == doctest::Approx(2));
    CHECK(r.angle >= -90.0);
    CHECK(r.angle < 90.0);
    CHECK(std::abs(std::abs(r.angle) - 90.0) < 1e-9);
  }

  TEST_CASE("min_rotated_rect on random convex octagons") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
      const Polygon p = oracle::random_convex(rng, 8, 50, 50, 5, 40);
      const RotatedRect r = min_rotated_rect(p);
      const double sweep = oracle::sweep_min_rect_area(p);
      CHECK(r.area() <= sweep + 1e-9);
      CHECK(std::abs(r.area() - sweep) <= 1e-6);
      CHECK(r.width >= r.height);
      // every vertex lies inside the rectangle
      const double c = std::cos(r.angle * M_PI / 180), s = std::sin(r.angle * M_PI / 180);
      for (Point v : p.vertices) {
        const double lx = (v.x - r.center.x) * c + (v.y - r.center.y) * s;
        const double ly = -(v.x - r.center.x) * s + (v.y - r.center.y) * c;
        CHECK(std::abs(lx) <= r.width / 2 + 1e-7);
        CHECK(std::abs(ly) <= r.height / 2 + 1e-7);
      }
    }
  }

  TEST_CASE("polygon_iou examples") {
    const Polygon sq = th::rect(0, 0, 1, 1);
    CHECK(polygon_iou(sq, sq) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(polygon_iou(sq, th::rect(10, 10, 11, 11)) == 0.0);
    const Polygon shifted = th::rect(0.5, 0, 1.5, 1);
    CHECK(polygon_iou(sq, shifted) == doctest::Approx(0.5 / 1.5));
    CHECK(std::abs(polygon_iou(sq, shifted) - oracle::raster_iou(sq, shifted)) <= 1e-3);
  }

  TEST_CASE("polygon_iou hulls non-convex inputs") {
    const Polygon ell{{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}};
    CHECK(polygon_iou(ell, th::rect(0, 0, 2, 2)) == doctest::Approx(3.5 / 4.0));
  }

  TEST_CASE("polygon_iou agrees with the raster oracle") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> off(-15, 15);
    for (int trial = 0; trial < 60; ++trial) {
      const Polygon a = oracle::random_convex(rng, 4, 50, 50, 10, 30);
      const Polygon b = oracle::random_convex(rng, 4, 50 + off(rng), 50 + off(rng), 10, 30);
      CHECK(std::abs(polygon_iou(a, b) - oracle::raster_iou(a, b)) <= 1e-3);
    }
  }

  TEST_CASE("iou and rectangle invariants") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> off(-20, 20);
    for (int trial = 0; trial < 300; ++trial) {
      const Polygon a = oracle::random_convex(rng, 3 + trial % 6, 0, 0, 2, 20);
      const Polygon b = oracle::random_convex(rng, 3 + trial % 5, off(rng), off(rng), 2, 20);
      const double ab = polygon_iou(a, b), ba = polygon_iou(b, a);
      CHECK(ab == doctest::Approx(ba).epsilon(1e-9));
      CHECK(ab >= 0.0);
      CHECK(ab <= 1.0);
      CHECK(std::abs(polygon_iou(a, a) - 1.0) <= 1e-9);
      const double area = polygon_area(a);
      CHECK(min_aabb(a).area() >= area - 1e-9);
      CHECK(min_rotated_rect(a).area() >= area - 1e-9);
      CHECK(min_rotated_rect(a).area() <= min_aabb(a).area() + 1e-9);
    }
  }

  TEST_CASE("is_vertical_instance") {
    CHECK(is_vertical_instance(th::rect(0, 0, 30, 64), "AB"));
    CHECK_FALSE(is_vertical_instance(th::rect(0, 0, 33, 64), "AB"));
    CHECK_FALSE(is_vertical_instance(th::rect(0, 0, 20, 100), "A"));
    CHECK_FALSE(is_vertical_instance(th::rect(0, 0, 20, 100), "\xe4\xbd\xa0"));
  }

  TEST_CASE("is_simple agrees with the segment-pair oracle") {
    const Polygon bowtie{{{0, 0}, {2, 2}, {2, 0}, {0, 2}}};
    CHECK(oracle::self_intersects(bowtie));
    CHECK_FALSE(is_simple(bowtie));
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> u(0, 20);
    int crossed = 0;
    for (int trial = 0; trial < 2000; ++trial) {
      Polygon p;
      for (int i = 0; i < 4 + trial % 3; ++i) p.vertices.push_back({double(u(rng)), double(u(rng))});
      if (std::abs(signed_area(p.vertices)) < 1e-9) continue;
      bool dup = false;
      for (std::size_t i = 0; i < p.vertices.size(); ++i) {
        for (std::size_t j = i + 1; j < p.vertices.size(); ++j) dup |= p.vertices[i] == p.vertices[j];
      }
      if (dup) continue;
      const bool bad = oracle::self_intersects(p);
      crossed += bad;
      // adjacent collinear overlap is a separate rule; only compare the clear cases
      bool adjacent_overlap = false;
      const std::size_t n = p.vertices.size();
      for (std::size_t i = 0; i < n; ++i) {
        const Point a = p.vertices[(i + n - 1) % n], b = p.vertices[i], c = p.vertices[(i + 1) % n];
        if (oracle::orient(a, b, c) == 0 && dot(a - b, c - b) > 0) adjacent_overlap = true;
      }
      if (!adjacent_overlap) CHECK(is_simple(p) == !bad);
    }
    CHECK(crossed > 100);
  }
}
