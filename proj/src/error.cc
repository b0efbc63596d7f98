#include "planar_pose/error.h"

namespace planar_pose {

std::string_view ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput:
      return "invalid_input";
    case ErrorCode::kDegenerateConfiguration:
      return "degenerate_configuration";
    case ErrorCode::kNoSolution:
      return "no_solution";
    case ErrorCode::kDegenerateSample:
      return "degenerate_sample";
    case ErrorCode::kRobustFailure:
      return "robust_failure";
    case ErrorCode::kGenerationFailure:
      return "generation_failure";
    case ErrorCode::kParse:
      return "parse_error";
  }
  return "unknown";
}

}  // namespace planar_pose
