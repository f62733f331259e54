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

#include "strkit/text.hpp"

using namespace strkit;

TEST_SUITE("text") {
  TEST_CASE("utf8 round trip and length") {
    const std::string s = "Caf\xc3\xa9 \xe4\xbd\xa0\xe5\xa5\xbd";
    CHECK(text::length(s) == 7);
    CHECK(text::encode_utf8(text::decode_utf8(s)) == s);
  }

  TEST_CASE("invalid bytes decode to the replacement character") {
    const std::u32string d = text::decode_utf8(std::string("a\xff", 2));
    REQUIRE(d.size() == 2);
    CHECK(d[1] == U'�');
    CHECK(text::decode_utf8(std::string("\xe4\xbd", 2)).back() == U'�');
  }

  TEST_CASE("trim and lower") {
    CHECK(text::trim(U"  ab c\t") == U"ab c");
    CHECK(text::trim(U"   ").empty());
    CHECK(text::ascii_lower("HeLLo \xc3\x89") == "hello \xc3\x89");
  }
}
