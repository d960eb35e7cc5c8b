// Copyright 2026 The WheelArm Authors
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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wheelarm {

// Error taxonomy shared by every module. The C API maps these one-to-one onto
// wa_status values, and the CLI prints name() on domain failures.
enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kNonOrthogonalInput,
  kMaxIterationsExceeded,
  kJointLimitViolation,
  kSchemaError,
  kOutOfReach,
  kMalformedCommand,
  kIkRejected,
  kSessionAlreadyActive,
  kNoActiveSession,
  kScriptError,
  kOutOfRange,
  kEmptyTopic,
  kNoOverlap,
  kIoError,
  kCorruptContainer,
  kSchemaMismatch,
  kShapeMismatch,
  kInsufficientData,
  kNotOperator,
  kInternal,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

// Raised by the IK solver; carries the residual twist norm at exit and the
// final iterate so callers can re-seed.
class IkError : public Error {
 public:
  IkError(ErrorCode code, const std::string& message, double residual, int iterations)
      : Error(code, message), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

// CorruptContainer with the file and byte offset where the damage was noticed.
class CorruptContainerError : public Error {
 public:
  CorruptContainerError(std::string file, std::uint64_t offset, const std::string& what)
      : Error(ErrorCode::kCorruptContainer,
              what + " (" + file + " @ " + std::to_string(offset) + ")"),
        file_(std::move(file)),
        offset_(offset) {}

  const std::string& file() const noexcept { return file_; }
  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::string file_;
  std::uint64_t offset_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace wheelarm
