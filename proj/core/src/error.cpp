#include "rotlab/error.hpp"

namespace rotlab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kPrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::kRationalInput: return "RationalInput";
    case ErrorCode::kConstructionFailed: return "ConstructionFailed";
    case ErrorCode::kNoJump: return "NoJump";
    case ErrorCode::kJumpCollision: return "JumpCollision";
    case ErrorCode::kSizeLimit: return "SizeLimit";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kDegenerateG: return "DegenerateG";
  }
  return "Unknown";
}

LabError::LabError(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

RationalInputError::RationalInputError(std::vector<std::uint64_t> digits,
                                       const std::string& message)
    : LabError(ErrorCode::kRationalInput, message), digits_(std::move(digits)) {}

JumpCollisionError::JumpCollisionError(std::uint64_t index, unsigned bits,
                                       const std::string& message)
    : LabError(ErrorCode::kJumpCollision, message), index_(index), bits_(bits) {}

void fail(ErrorCode code, const std::string& message) { throw LabError(code, message); }

}  // namespace rotlab
