#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rotlab/rational.hpp"

namespace rotlab {

// A point of R/Z stored exactly through its representative in [0,1).
class TorusPoint {
 public:
  TorusPoint() = default;
  explicit TorusPoint(const Rational& x);

  static TorusPoint parse(std::string_view text);
  static TorusPoint from_double(double x);

  const Rational& exact() const noexcept { return value_; }
  double value() const { return to_double(value_); }
  // ||x|| = min(x, 1 - x)
  double norm() const;

  TorusPoint operator+(const TorusPoint& o) const { return TorusPoint(value_ + o.value_); }
  TorusPoint operator-(const TorusPoint& o) const { return TorusPoint(value_ - o.value_); }
  TorusPoint operator-() const { return TorusPoint(-value_); }
  bool operator==(const TorusPoint& o) const { return value_ == o.value_; }
  bool operator<(const TorusPoint& o) const { return value_ < o.value_; }

  std::string to_string() const;

 private:
  Rational value_{0};
};

// The jump H = f(gamma-) - f(gamma+) at gamma.
struct Jump {
  TorusPoint gamma;
  double H = 0.0;
};

// Mean-zero piecewise smooth circle function f = h + r: h is the
// sawtooth-plus-indicators function carrying the jumps (see NormalForm) and
// r is a continuous mean-zero polynomial in {x}, coefficients lowest first.
struct JumpFunction {
  std::vector<Jump> jumps;
  std::vector<double> smooth;

  static JumpFunction sawtooth();                      // {x} - 1/2
  static JumpFunction indicator(const TorusPoint& gamma);  // 1_[0,gamma) - gamma
  static JumpFunction frac_squared();                  // {x}^2 - 1/3
  // P({x}) + sum H_i (1_[0,gamma_i)(x) - gamma_i) for a mean-zero
  // polynomial P (coefficients lowest first).
  static JumpFunction polynomial_in_frac(const std::vector<double>& coeffs,
                                         std::vector<Jump> extra_jumps = {});

  // Sorts jumps and checks: a nonzero jump, distinct points, continuity of
  // r, mean zero by quadrature, and jump heights against one-sided limits.
  void validate();

  double total_jump() const;
  double smooth_at(double x) const;
};

// h(x) = (sum H_i)({x} - 1/2) + sum H_i (1_[0,gamma_i)(x) - {gamma_i}).
// When a jump sits at 0, `shift` y0 != 0 is recorded so that the shifted
// jumps gamma_i + y0 avoid 0.
struct NormalForm {
  double total_jump = 0.0;
  std::vector<Jump> indicator_terms;
  TorusPoint shift;
  bool shifted = false;

  // Jumps of h(. - y0), which is again a normal form.
  std::vector<Jump> shifted_jumps() const;
  TorusPoint shifted_start(const TorusPoint& x0) const;
};

// NoJump when every H_i vanishes.
NormalForm normal_form(const JumpFunction& f);
NormalForm normal_form(const NormalForm& h);
NormalForm normal_form_from_jumps(std::vector<Jump> jumps);

// Right-continuous evaluation: 1_[0,gamma) is 1 at 0 and 0 at gamma.
double evaluate(const NormalForm& h, const TorusPoint& x);
double evaluate(const JumpFunction& f, const TorusPoint& x);
double evaluate(const JumpFunction& f, double x);

// Exact jump sweep (coincident jumps merge before absolute values) plus
// the integral of |h'|.
double total_variation(const NormalForm& h);
double total_variation(const JumpFunction& f);

}  // namespace rotlab
