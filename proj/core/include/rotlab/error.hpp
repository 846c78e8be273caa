#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rotlab {

// Machine-readable failure classes shared by every module.
enum class ErrorCode {
  kInvalidInput,
  kPrecisionExhausted,
  kRationalInput,
  kConstructionFailed,
  kNoJump,
  kJumpCollision,
  kSizeLimit,
  kNoConvergence,
  kDegenerateG,
};

std::string_view to_string(ErrorCode code) noexcept;

class LabError : public std::runtime_error {
 public:
  LabError(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised when a continued fraction terminates early; carries the digits
// that were produced before termination.
class RationalInputError : public LabError {
 public:
  RationalInputError(std::vector<std::uint64_t> digits, const std::string& message);

  const std::vector<std::uint64_t>& digits() const noexcept { return digits_; }

 private:
  std::vector<std::uint64_t> digits_;
};

// Raised when an orbit point cannot be separated from a discontinuity.
class JumpCollisionError : public LabError {
 public:
  JumpCollisionError(std::uint64_t index, unsigned bits, const std::string& message);

  std::uint64_t orbit_index() const noexcept { return index_; }
  unsigned bits() const noexcept { return bits_; }

 private:
  std::uint64_t index_;
  unsigned bits_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace rotlab
