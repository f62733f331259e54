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

#include "strkit/error.hpp"

namespace strkit {

ParseError::ParseError(std::string path, std::size_t line,
                       const std::string &what)
    : Error(path + ":" + std::to_string(line) + ": " + what),
      path_(std::move(path)),
      line_(line) {}

}  // namespace strkit
