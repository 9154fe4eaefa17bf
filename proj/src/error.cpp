// Copyright 2026 The quditnet Authors
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

#include "quditnet/error.hpp"

namespace quditnet {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DegenerateParameter: return "DegenerateParameter";
    case ErrorCode::SingularSolve: return "SingularSolve";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ClassMissing: return "ClassMissing";
    case ErrorCode::DegenerateStep: return "DegenerateStep";
    case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::TruncatedPayload: return "TruncatedPayload";
    case ErrorCode::DimensionOverflow: return "DimensionOverflow";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::ClassTooSmall: return "ClassTooSmall";
    case ErrorCode::EmptySplit: return "EmptySplit";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace quditnet
