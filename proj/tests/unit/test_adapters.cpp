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

#include "helpers.hpp"
#include "strkit/adapters.hpp"
#include "strkit/error.hpp"

using namespace strkit;

TEST_SUITE("adapters") {
  TEST_CASE("icdar lines: quads, boxes, ignored regions and commas in labels") {
    const std::string gt =
        "\xEF\xBB\xBF"
        "377,117,463,117,465,130,378,130,Genaxis Theatre\r\n"
        "493,115,519,115,519,131,493,131,###\n"
        "\n"
        "10,20,110,60,hello, world\n"
        "1,2,9,2,9,8,1,8,\"42\"\n";
    const auto r = adapters::parse_icdar_lines(gt, "img_1.jpg", "img_1", "ic15");
    REQUIRE(r.size() == 4);
    CHECK(r[0].id == "ic15/img_1/0");
    CHECK(r[0].label == "Genaxis Theatre");
    CHECK(r[0].polygon.vertices.size() == 4);
    CHECK(r[0].polygon.vertices[2].x == 465);
    CHECK(r[0].source_image_id == "img_1");
    CHECK(r[1].ignored);
    CHECK(r[1].label.empty());
    CHECK(r[2].label == "hello, world");
    CHECK(geometry::min_aabb(r[2].polygon) == geometry::AABB{10, 20, 110, 60});
    CHECK(r[3].label == "42");
    for (const auto &inst : r) CHECK(validate(inst).empty());
  }

  TEST_CASE("icdar line without enough coordinates") {
    CHECK_THROWS_AS(adapters::parse_icdar_lines("1,2,word\n", "a", "a", "d"), ParseError);
  }

  TEST_CASE("import_icdar pairs ground truth with images") {
    th::TempDir dir;
    fs::create_directories(dir / "gt");
    fs::create_directories(dir / "img");
    th::spit(dir / "gt/gt_b.txt", "0,0,10,0,10,5,0,5,B\n");
    th::spit(dir / "gt/gt_a.txt", "0,0,10,0,10,5,0,5,A\n0,0,4,4,x\n");
    th::spit(dir / "img/a.jpg", "jpeg bytes");
    th::spit(dir / "img/b.png", "png bytes");
    const auto r = adapters::import_icdar(dir / "gt", dir / "img", "set");
    REQUIRE(r.size() == 3);
    CHECK(r[0].id == "set/a/0");
    CHECK(r[0].image_ref == "a.jpg");
    CHECK(r[2].image_ref == "b.png");

    th::spit(dir / "gt/gt_c.txt", "0,0,10,0,10,5,0,5,C\n");
    CHECK_THROWS_AS(adapters::import_icdar(dir / "gt", dir / "img", "set"), Error);
  }

  TEST_CASE("coco-text records") {
    const Json doc = Json::parse(R"({
      "imgs": {"7": {"file_name": "COCO_7.jpg", "id": 7}},
      "anns": {
        "12": {"id": 12, "image_id": 7, "bbox": [10, 20, 30, 8],
               "utf8_string": "EXIT", "legibility": "legible", "language": "english"},
        "3": {"id": 3, "image_id": 7, "mask": [0, 0, 9, 0, 9, 4, 0, 4],
              "utf8_string": "", "legibility": "illegible", "language": "na"}
      }})");
    const auto r = adapters::parse_coco_text(doc, "coco");
    REQUIRE(r.size() == 2);
    CHECK(r[0].id == "coco/3");
    CHECK(r[0].ignored);
    CHECK(r[0].polygon.vertices.size() == 4);
    CHECK(r[1].id == "coco/12");
    CHECK(r[1].label == "EXIT");
    CHECK(r[1].language == "latin");
    CHECK(r[1].image_ref == "COCO_7.jpg");
    CHECK(r[1].source_image_id == "7");
    CHECK(geometry::min_aabb(r[1].polygon) == geometry::AABB{10, 20, 40, 28});

    const Json orphan = Json::parse(
        R"({"imgs": {}, "anns": {"1": {"id": 1, "image_id": 9, "bbox": [0,0,1,1]}}})");
    CHECK_THROWS_AS(adapters::parse_coco_text(orphan, "coco"), Error);
  }
}
