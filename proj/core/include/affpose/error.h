#ifndef AFFPOSE_ERROR_H_
#define AFFPOSE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace affpose {

enum class ErrorCode {
  kDegenerateMotion,
  kFrameMismatch,
  kDegenerateInput,
  kNumericalFailure,
  kNoRealSolution,
  kRankDeficient,
  kInconsistentPattern,
  kEmptyResult,
  kEmptyInput,
  kAllIterationsFailed,
  kGenerationFailed,
  kPointAtInfinity,
  kInvalidArgument,
  kParseError,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception type. The code
// identifies the failure class; the message carries the context.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace affpose

#endif  // AFFPOSE_ERROR_H_
