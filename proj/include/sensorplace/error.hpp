// Copyright 2026 The Authors.
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
#include <string_view>

namespace sensorplace {

enum class ErrorCode {
  kNotSquare,
  kNotSymmetric,
  kNotPositiveDefinite,
  kSingularBlock,
  kIndexOutOfRange,
  kAlreadySelected,
  kDimensionMismatch,
  kInvalidArgument,
  kNonPositiveVariance,
  kParseError,
  kSelfLoop,
  kDuplicateEdge,
  kNonPositiveWeight,
  kKTooLarge,
  kTooManySubsets,
  kInstanceTooSmall,
  kIo,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotSquare: return "NotSquare";
    case ErrorCode::kNotSymmetric: return "NotSymmetric";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kSingularBlock: return "SingularBlock";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kAlreadySelected: return "AlreadySelected";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonPositiveVariance: return "NonPositiveVariance";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kDuplicateEdge: return "DuplicateEdge";
    case ErrorCode::kNonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::kKTooLarge: return "KTooLarge";
    case ErrorCode::kTooManySubsets: return "TooManySubsets";
    case ErrorCode::kInstanceTooSmall: return "InstanceTooSmall";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

/// Single exception type for the library. `detail()` carries the failing
/// pivot for kNotPositiveDefinite, the offending index for range errors, and
/// the 1-based line for kParseError; zero otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t detail = 0)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  std::size_t detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::size_t detail_;
};

}  // namespace sensorplace
