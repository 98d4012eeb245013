#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace trisweep {

enum class ErrorCode {
  kInvalidArgument,
  kBehindCamera,
  kNonPositiveDepth,
  kDegenerateWeights,
  kDegenerateRig,
  kOnAxis,
  kRayParallelOrDescending,
  kCollinear,
  kDuplicatePoints,
  kDegenerateTriangle,
  kOutsideCoverage,
  kSizeMismatch,
  kTooSmall,
  kLevelOutOfRange,
  kSingularHomography,
  kBadGrouping,
  kShapeMismatch,
  kLevelMismatch,
  kEmptyMask,
  kParse,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kBehindCamera: return "BehindCamera";
    case ErrorCode::kNonPositiveDepth: return "NonPositiveDepth";
    case ErrorCode::kDegenerateWeights: return "DegenerateWeights";
    case ErrorCode::kDegenerateRig: return "DegenerateRig";
    case ErrorCode::kOnAxis: return "OnAxis";
    case ErrorCode::kRayParallelOrDescending: return "RayParallelOrDescending";
    case ErrorCode::kCollinear: return "Collinear";
    case ErrorCode::kDuplicatePoints: return "DuplicatePoints";
    case ErrorCode::kDegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::kOutsideCoverage: return "OutsideCoverage";
    case ErrorCode::kSizeMismatch: return "SizeMismatch";
    case ErrorCode::kTooSmall: return "TooSmall";
    case ErrorCode::kLevelOutOfRange: return "LevelOutOfRange";
    case ErrorCode::kSingularHomography: return "SingularHomography";
    case ErrorCode::kBadGrouping: return "BadGrouping";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kLevelMismatch: return "LevelMismatch";
    case ErrorCode::kEmptyMask: return "EmptyMask";
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace trisweep
