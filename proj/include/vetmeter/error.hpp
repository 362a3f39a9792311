// Copyright 2026 The vetmeter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VETMETER_ERROR_HPP_
#define VETMETER_ERROR_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vetmeter {

enum class ErrorCode {
  kMalformedLine,
  kNegativeDuration,
  kDuplicateKey,
  kZeroUnitSize,
  kEmptyTrace,
  kEmptySegment,
  kTraceTooShort,
  kIndexOutOfRange,
  kValueOutOfRange,
  kZeroIdealCost,
  kNoValidTasks,
  kNonPositiveDuration,
  kKTooLarge,
  kDegenerateTail,
  kEmptySample,
  kInvalidConfig,
  kIoFailure,
};

constexpr std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kNegativeDuration: return "NegativeDuration";
    case ErrorCode::kDuplicateKey: return "DuplicateKey";
    case ErrorCode::kZeroUnitSize: return "ZeroUnitSize";
    case ErrorCode::kEmptyTrace: return "EmptyTrace";
    case ErrorCode::kEmptySegment: return "EmptySegment";
    case ErrorCode::kTraceTooShort: return "TraceTooShort";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::kZeroIdealCost: return "ZeroIdealCost";
    case ErrorCode::kNoValidTasks: return "NoValidTasks";
    case ErrorCode::kNonPositiveDuration: return "NonPositiveDuration";
    case ErrorCode::kKTooLarge: return "KTooLarge";
    case ErrorCode::kDegenerateTail: return "DegenerateTail";
    case ErrorCode::kEmptySample: return "EmptySample";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIoFailure: return "IoFailure";
  }
  return "Unknown";
}

/// Every failure raised by the library. `line()` is set for ingest errors
/// that can be attributed to a 1-based input line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail,
        std::optional<std::uint64_t> line = std::nullopt)
      : std::runtime_error(format_message(code, detail, line)),
        code_(code),
        detail_(detail),
        line_(line) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  std::optional<std::uint64_t> line() const noexcept { return line_; }

 private:
  static std::string format_message(ErrorCode code, const std::string& detail,
                                    std::optional<std::uint64_t> line) {
    std::string msg(error_code_name(code));
    if (line) {
      msg += " (line " + std::to_string(*line) + ")";
    }
    if (!detail.empty()) {
      msg += ": " + detail;
    }
    return msg;
  }

  ErrorCode code_;
  std::string detail_;
  std::optional<std::uint64_t> line_;
};

}  // namespace vetmeter

#endif  // VETMETER_ERROR_HPP_
