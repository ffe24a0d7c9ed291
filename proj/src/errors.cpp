#include "momentmix/errors.hpp"

namespace momentmix {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::RankTooLarge: return "RankTooLarge";
    case ErrorCode::OrderExceedsDim: return "OrderExceedsDim";
    case ErrorCode::MissingEntry: return "MissingEntry";
    case ErrorCode::KeyCollision: return "KeyCollision";
    case ErrorCode::ShapeCondition: return "ShapeCondition";
    case ErrorCode::EigenFailure: return "EigenFailure";
    case ErrorCode::MaxIterations: return "MaxIterations";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::TailsDegenerate: return "TailsDegenerate";
    case ErrorCode::HeadsDegenerate: return "HeadsDegenerate";
    case ErrorCode::ScalesDegenerate: return "ScalesDegenerate";
    case ErrorCode::DegenerateWeight: return "DegenerateWeight";
    case ErrorCode::OrderConflict: return "OrderConflict";
    case ErrorCode::CovDesignDegenerate: return "CovDesignDegenerate";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void rethrow_with_stage(const Error& error, std::string_view stage) {
  std::string what = error.what();
  // Drop the "<Code>: " prefix so it is not repeated.
  const auto prefix = std::string(to_string(error.code())) + ": ";
  if (what.rfind(prefix, 0) == 0) what.erase(0, prefix.size());
  throw Error(error.code(), std::string(stage) + ": " + what);
}

}  // namespace momentmix
