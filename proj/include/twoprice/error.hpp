// Copyright 2026 The twoprice Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TWOPRICE_ERROR_HPP_
#define TWOPRICE_ERROR_HPP_

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

namespace twoprice {

enum class ErrorCode {
  kInvalidValuation,
  kInstanceTooLarge,
  kPriceOrderViolation,
  kZeroWelfare,
  kNotAnEquilibrium,
  kNotSubadditive,
  kNotXOS,
  kIndexOutOfRange,
  kUnsupportedClass,
  kUnknownInstance,
  kCountMismatch,
  kDimensionMismatch,
  kNoPairFound,
  kMalformedInput,
  kFixtureFailed,
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidValuation: return "InvalidValuation";
    case ErrorCode::kInstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::kPriceOrderViolation: return "PriceOrderViolation";
    case ErrorCode::kZeroWelfare: return "ZeroWelfare";
    case ErrorCode::kNotAnEquilibrium: return "NotAnEquilibrium";
    case ErrorCode::kNotSubadditive: return "NotSubadditive";
    case ErrorCode::kNotXOS: return "NotXOS";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kUnsupportedClass: return "UnsupportedClass";
    case ErrorCode::kUnknownInstance: return "UnknownInstance";
    case ErrorCode::kCountMismatch: return "CountMismatch";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNoPairFound: return "NoPairFound";
    case ErrorCode::kMalformedInput: return "MalformedInput";
    case ErrorCode::kFixtureFailed: return "FixtureFailed";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

// Largest item count accepted by operations that enumerate all 2^m bundles.
// TWOPRICE_MAX_GENERAL_M raises the default of 20; bundles are 32-bit masks,
// so 30 is a hard ceiling.
inline std::size_t MaxGeneralItems() {
  constexpr std::size_t kDefault = 20;
  constexpr std::size_t kCeiling = 30;
  if (const char* env = std::getenv("TWOPRICE_MAX_GENERAL_M")) {
    char* end = nullptr;
    unsigned long parsed = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && parsed > 0) {
      return parsed < kCeiling ? parsed : kCeiling;
    }
  }
  return kDefault;
}

inline void RequireGeneralSize(std::size_t m, std::string_view what) {
  if (m > MaxGeneralItems()) {
    Fail(ErrorCode::kInstanceTooLarge,
         std::string(what) + " enumerates 2^m bundles; m = " +
             std::to_string(m) + " exceeds the limit of " +
             std::to_string(MaxGeneralItems()));
  }
}

}  // namespace twoprice

#endif  // TWOPRICE_ERROR_HPP_
