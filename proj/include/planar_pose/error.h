#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace planar_pose {

enum class ErrorCode {
  kInvalidInput,
  kDegenerateConfiguration,
  kNoSolution,
  kDegenerateSample,
  kRobustFailure,
  kGenerationFailure,
  kParse,
};

std::string_view ToString(ErrorCode code);

// Every failure surfaced by the library is an Error with a stable code, so
// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace planar_pose
