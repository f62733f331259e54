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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace strkit {

/// Runtime failure inside a pipeline stage (exit status 1 at the CLI).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad invocation or conflicting configuration (exit status 2 at the CLI).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Malformed record in a line-delimited file.
class ParseError : public Error {
 public:
  ParseError(std::string path, std::size_t line, const std::string &what);

  const std::string &path() const { return path_; }
  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

/// Degenerate geometric input (collinear points, zero area, empty rect).
class GeometryError : public Error {
 public:
  using Error::Error;
};

}  // namespace strkit
