/*
   Copyright 2026 The flatpath Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flatpath {

enum class ErrorCode {
  InvalidPolygon,
  NonParallelEdges,
  LengthMismatch,
  UnpairedEdge,
  AngleNotMultipleOf2Pi,
  DegenerateMatrix,
  NotFoundWithinBound,
  InvalidEpsilon,
  InvalidState,
  SingularImpact,
  OverlappingTransversal,
  IncompleteDecomposition,
  GridMismatch,
  TooManyAborts,
  Parse,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidPolygon: return "InvalidPolygon";
    case ErrorCode::NonParallelEdges: return "NonParallelEdges";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::UnpairedEdge: return "UnpairedEdge";
    case ErrorCode::AngleNotMultipleOf2Pi: return "AngleNotMultipleOf2Pi";
    case ErrorCode::DegenerateMatrix: return "DegenerateMatrix";
    case ErrorCode::NotFoundWithinBound: return "NotFoundWithinBound";
    case ErrorCode::InvalidEpsilon: return "InvalidEpsilon";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::SingularImpact: return "SingularImpact";
    case ErrorCode::OverlappingTransversal: return "OverlappingTransversal";
    case ErrorCode::IncompleteDecomposition: return "IncompleteDecomposition";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::TooManyAborts: return "TooManyAborts";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

// All library failures are reported through this type; code() tells callers
// which contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace flatpath
