#include "rotlab/torus.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "rotlab/error.hpp"

namespace rotlab {
namespace {

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 4> kGlNodes = {0.1834346424956498, 0.5255324099163290,
                                            0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> kGlWeights = {0.3626837833783620, 0.3137066458778873,
                                              0.2223810344533745, 0.1012285362903763};

double poly(const std::vector<double>& c, double x) {
  double out = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) out = out * x + *it;
  return out;
}

std::vector<double> derivative(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(static_cast<double>(i) * c[i]);
  return d;
}

double jump_part(const std::vector<Jump>& jumps, double x) {
  double total = 0.0;
  double out = 0.0;
  for (const auto& j : jumps) {
    const double g = j.gamma.value();
    total += j.H;
    out += j.H * ((x < g ? 1.0 : 0.0) - g);
  }
  return out + total * (x - 0.5);
}

double jump_part(const std::vector<Jump>& jumps, const TorusPoint& x) {
  double total = 0.0;
  double out = 0.0;
  for (const auto& j : jumps) {
    total += j.H;
    out += j.H * ((x.exact() < j.gamma.exact() ? 1.0 : 0.0) - j.gamma.value());
  }
  return out + total * (x.value() - 0.5);
}

std::vector<Jump> merged(std::vector<Jump> jumps) {
  std::sort(jumps.begin(), jumps.end(),
            [](const Jump& a, const Jump& b) { return a.gamma < b.gamma; });
  std::vector<Jump> out;
  for (const auto& j : jumps) {
    if (!out.empty() && out.back().gamma == j.gamma) {
      out.back().H += j.H;
    } else {
      out.push_back(j);
    }
  }
  return out;
}

// |jump| at each distinct point, with the jump at 0 taken as the remainder
// S - sum of the others so that an implicit sawtooth drop is counted.
double jump_variation(const std::vector<Jump>& jumps) {
  const auto m = merged(jumps);
  double total = 0.0;
  double away = 0.0;
  double var = 0.0;
  for (const auto& j : m) {
    total += j.H;
    if (j.gamma.exact() != 0) {
      away += j.H;
      var += std::fabs(j.H);
    }
  }
  return var + std::fabs(total - away);
}

}  // namespace

TorusPoint::TorusPoint(const Rational& x) : value_(frac(x)) {}

TorusPoint TorusPoint::parse(std::string_view text) { return TorusPoint(parse_rational(text)); }

TorusPoint TorusPoint::from_double(double x) {
  if (!std::isfinite(x)) fail(ErrorCode::kInvalidInput, "torus point must be finite");
  return TorusPoint(rational_from_double(x));
}

double TorusPoint::norm() const {
  const Rational other = Rational(1) - value_;
  return to_double(value_ < other ? value_ : other);
}

std::string TorusPoint::to_string() const { return rotlab::to_string(value_); }

JumpFunction JumpFunction::sawtooth() { return JumpFunction{{Jump{TorusPoint(), 1.0}}, {}}; }

JumpFunction JumpFunction::indicator(const TorusPoint& gamma) {
  if (gamma.exact() == 0) fail(ErrorCode::kInvalidInput, "indicator needs gamma in (0,1)");
  return JumpFunction{{Jump{TorusPoint(), -1.0}, Jump{gamma, 1.0}}, {}};
}

JumpFunction JumpFunction::frac_squared() {
  return JumpFunction{{Jump{TorusPoint(), 1.0}}, {1.0 / 6.0, -1.0, 1.0}};
}

JumpFunction JumpFunction::polynomial_in_frac(const std::vector<double>& coeffs,
                                              std::vector<Jump> extra_jumps) {
  const double h0 = poly(coeffs, 1.0) - poly(coeffs, 0.0);
  std::vector<double> rest = coeffs;
  rest.resize(std::max<std::size_t>(rest.size(), 2), 0.0);
  rest[0] += 0.5 * h0;
  rest[1] -= h0;
  double at_zero = h0;
  for (const auto& j : extra_jumps) at_zero -= j.H;
  std::vector<Jump> jumps;
  if (at_zero != 0.0) jumps.push_back(Jump{TorusPoint(), at_zero});
  for (auto& j : extra_jumps) jumps.push_back(j);
  return JumpFunction{merged(std::move(jumps)), std::move(rest)};
}

double JumpFunction::total_jump() const {
  double s = 0.0;
  for (const auto& j : jumps) s += j.H;
  return s;
}

double JumpFunction::smooth_at(double x) const { return poly(smooth, x); }

void JumpFunction::validate() {
  std::sort(jumps.begin(), jumps.end(),
            [](const Jump& a, const Jump& b) { return a.gamma < b.gamma; });
  for (std::size_t i = 0; i + 1 < jumps.size(); ++i) {
    if (jumps[i].gamma == jumps[i + 1].gamma) {
      fail(ErrorCode::kInvalidInput, "duplicate jump at " + jumps[i].gamma.to_string());
    }
  }
  bool any = false;
  for (const auto& j : jumps) {
    if (!std::isfinite(j.H)) fail(ErrorCode::kInvalidInput, "jump height must be finite");
    any = any || j.H != 0.0;
  }
  if (!any) fail(ErrorCode::kNoJump, "function has no jump");
  double scale = 1.0;
  for (double c : smooth) {
    if (!std::isfinite(c)) fail(ErrorCode::kInvalidInput, "smooth coefficient must be finite");
    scale += std::fabs(c);
  }
  if (std::fabs(smooth_at(1.0) - smooth_at(0.0)) > 1e-12 * scale) {
    fail(ErrorCode::kInvalidInput, "smooth part is not continuous on the circle");
  }

  const double var = total_variation(*this);
  std::vector<double> cuts = {0.0};
  for (const auto& j : jumps) {
    if (j.gamma.exact() != 0) cuts.push_back(j.gamma.value());
  }
  cuts.push_back(1.0);
  double mean = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    const double half = 0.5 * (cuts[i + 1] - cuts[i]);
    if (half <= 0.0) continue;
    // The piece is half-open on the right; evaluate strictly inside.
    for (std::size_t k = 0; k < kGlNodes.size(); ++k) {
      const double a = mid - half * kGlNodes[k];
      const double b = mid + half * kGlNodes[k];
      mean += half * kGlWeights[k] * (evaluate(*this, a) + evaluate(*this, b));
    }
  }
  if (std::fabs(mean) > 1e-12 * (1.0 + var)) {
    fail(ErrorCode::kInvalidInput, "function is not mean-zero (mean " + std::to_string(mean) + ")");
  }

  constexpr double kStep = 1e-10;
  for (const auto& j : jumps) {
    const double g = j.gamma.value();
    const double left = g - kStep < 0.0 ? g - kStep + 1.0 : g - kStep;
    const double observed = evaluate(*this, left) - evaluate(*this, g + kStep);
    if (std::fabs(observed - j.H) > 1e-8) {
      fail(ErrorCode::kInvalidInput, "jump height at " + j.gamma.to_string() +
                                         " disagrees with one-sided limits");
    }
  }
}

std::vector<Jump> NormalForm::shifted_jumps() const {
  std::vector<Jump> out;
  out.reserve(indicator_terms.size());
  for (const auto& j : indicator_terms) out.push_back(Jump{j.gamma + shift, j.H});
  return out;
}

TorusPoint NormalForm::shifted_start(const TorusPoint& x0) const { return x0 + shift; }

NormalForm normal_form_from_jumps(std::vector<Jump> jumps) {
  auto m = merged(std::move(jumps));
  m.erase(std::remove_if(m.begin(), m.end(), [](const Jump& j) { return j.H == 0.0; }), m.end());
  if (m.empty()) fail(ErrorCode::kNoJump, "all jump heights vanish");
  NormalForm h;
  for (const auto& j : m) h.total_jump += j.H;
  h.indicator_terms = m;
  if (m.front().gamma.exact() == 0) {
    Rational best_mid = Rational(1, 2);
    Rational best_gap = -1;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const Rational& a = m[i].gamma.exact();
      const Rational b = i + 1 < m.size() ? m[i + 1].gamma.exact() : Rational(1);
      if (b - a > best_gap) {
        best_gap = b - a;
        best_mid = (a + b) / 2;
      }
    }
    h.shift = TorusPoint(-best_mid);
    h.shifted = true;
  }
  return h;
}

NormalForm normal_form(const JumpFunction& f) {
  JumpFunction copy = f;
  copy.validate();
  return normal_form_from_jumps(copy.jumps);
}

NormalForm normal_form(const NormalForm& h) { return normal_form_from_jumps(h.indicator_terms); }

double evaluate(const NormalForm& h, const TorusPoint& x) {
  double out = h.total_jump * (x.value() - 0.5);
  for (const auto& j : h.indicator_terms) {
    out += j.H * ((x.exact() < j.gamma.exact() ? 1.0 : 0.0) - j.gamma.value());
  }
  return out;
}

double evaluate(const JumpFunction& f, const TorusPoint& x) {
  return jump_part(f.jumps, x) + f.smooth_at(x.value());
}

double evaluate(const JumpFunction& f, double x) {
  x -= std::floor(x);
  return jump_part(f.jumps, x) + f.smooth_at(x);
}

double total_variation(const NormalForm& h) {
  return std::fabs(h.total_jump) + jump_variation(h.indicator_terms);
}

double total_variation(const JumpFunction& f) {
  double total = 0.0;
  for (const auto& j : f.jumps) total += j.H;
  // f' = S + r' between jumps; integrate |f'| over sign-constant pieces.
  std::vector<double> slope = derivative(f.smooth);
  slope.resize(std::max<std::size_t>(slope.size(), 1), 0.0);
  slope[0] += total;
  std::vector<double> roots = {0.0};
  constexpr int kCells = 1024;
  for (int i = 0; i < kCells; ++i) {
    double a = static_cast<double>(i) / kCells;
    double b = static_cast<double>(i + 1) / kCells;
    double fa = poly(slope, a);
    const double fb = poly(slope, b);
    if (fa == 0.0 || (fa < 0.0) == (fb < 0.0)) continue;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (a + b);
      const double fm = poly(slope, mid);
      if ((fm < 0.0) == (fa < 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    roots.push_back(0.5 * (a + b));
  }
  roots.push_back(1.0);
  auto antider = [&](double x) { return total * x + f.smooth_at(x); };
  double smooth_var = 0.0;
  for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
    smooth_var += std::fabs(antider(roots[i + 1]) - antider(roots[i]));
  }
  return smooth_var + jump_variation(f.jumps);
}

}  // namespace rotlab
