#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rotlab/rational.hpp"

namespace rotlab {

using Digit = std::uint64_t;

// How digits beyond the explicit prefix are produced.
struct TailRule {
  enum class Kind { kConstant, kPeriodic, kIndexed };

  Kind kind = Kind::kConstant;
  Digit value = 1;                              // kConstant
  std::vector<Digit> period;                    // kPeriodic
  std::function<Digit(std::size_t)> indexed;    // kIndexed, called with k >= 1

  static TailRule constant(Digit v);
  static TailRule periodic(std::vector<Digit> p);
  static TailRule custom(std::function<Digit(std::size_t)> fn);
};

// alpha = [0; a_1, a_2, ...] with a_k taken from `forced`, then `prefix`,
// then the tail rule.
struct DigitRule {
  std::vector<Digit> prefix;
  TailRule tail;
  std::map<std::size_t, Digit> forced;

  Digit digit(std::size_t k) const;
};

// alpha = (p + sqrt(d)) / q.
struct QuadraticSurd {
  Integer p;
  Integer d;
  Integer q;
};

// A decimal approximation of an irrational, trusted to 2^-bits.
struct PrecisionLiteral {
  std::string decimal;
  unsigned bits = 256;
};

class AlphaSpec {
 public:
  using Variant = std::variant<DigitRule, QuadraticSurd, PrecisionLiteral>;

  AlphaSpec(DigitRule rule);
  AlphaSpec(QuadraticSurd surd);
  AlphaSpec(PrecisionLiteral literal);

  static AlphaSpec golden();        // (-1 + sqrt 5) / 2 = [0; 1, 1, ...]
  static AlphaSpec sqrt2_minus_1();  // [0; 2, 2, ...]
  static AlphaSpec from_digits(std::vector<Digit> digits, Digit tail = 1);

  const Variant& variant() const noexcept { return v_; }

  bool is_exact() const noexcept { return !std::holds_alternative<PrecisionLiteral>(v_); }

 private:
  Variant v_;
};

// First K canonical digits a_1..a_K.
//   RationalInput  - the literal's exact expansion ends before K digits.
//   PrecisionExhausted - a literal digit differs on value +- 2^-bits.
std::vector<Digit> expand(const AlphaSpec& alpha, std::size_t K);

// Largest number of digits a literal certifies (infinite for exact specs).
std::size_t certified_digit_count(const AlphaSpec& alpha, std::size_t cap);

// Closed rational interval containing alpha.
struct Enclosure {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
};

// Enclosure of width at most 2^-bits. PrecisionExhausted when a literal
// is not precise enough.
Enclosure enclose(const AlphaSpec& alpha, unsigned bits);

// Certified continued-fraction digits shared by every point of [lo, hi].
// Stops at `max_digits`, when the endpoints disagree, or when an endpoint
// becomes a convergent (the digit there is ambiguous).
std::vector<Digit> common_digits(const Rational& lo, const Rational& hi, std::size_t max_digits);

// Full expansion of a rational in (0,1); terminates.
std::vector<Digit> rational_digits(const Rational& x, std::size_t max_digits);

}  // namespace rotlab
