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

#include "common/error.hpp"

namespace wheelarm {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonOrthogonalInput: return "NonOrthogonalInput";
    case ErrorCode::kMaxIterationsExceeded: return "MaxIterationsExceeded";
    case ErrorCode::kJointLimitViolation: return "JointLimitViolation";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kOutOfReach: return "OutOfReach";
    case ErrorCode::kMalformedCommand: return "MalformedCommand";
    case ErrorCode::kIkRejected: return "IkRejected";
    case ErrorCode::kSessionAlreadyActive: return "SessionAlreadyActive";
    case ErrorCode::kNoActiveSession: return "NoActiveSession";
    case ErrorCode::kScriptError: return "ScriptError";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kEmptyTopic: return "EmptyTopic";
    case ErrorCode::kNoOverlap: return "NoOverlap";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kCorruptContainer: return "CorruptContainer";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kNotOperator: return "NotOperator";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

}  // namespace wheelarm
