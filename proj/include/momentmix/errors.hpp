#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace momentmix {

enum class ErrorCode {
  Overflow,
  InvalidArgument,
  RankTooLarge,
  OrderExceedsDim,
  MissingEntry,
  KeyCollision,
  ShapeCondition,
  EigenFailure,
  MaxIterations,
  DegenerateSpectrum,
  TailsDegenerate,
  HeadsDegenerate,
  ScalesDegenerate,
  DegenerateWeight,
  OrderConflict,
  CovDesignDegenerate,
  Parse,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a stable code; the message
/// names the failing stage where one applies.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Re-throws `error` with `stage` prepended to the message, keeping the code.
[[noreturn]] void rethrow_with_stage(const Error& error, std::string_view stage);

}  // namespace momentmix
