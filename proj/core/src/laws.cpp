#include "rotlab/laws.hpp"

#include <algorithm>
#include <cmath>

#include "rotlab/error.hpp"

namespace rotlab {
namespace {

// Roots of A y^2 + B y + C strictly inside (lo, hi), ascending.
std::vector<double> roots_in(double A, double B, double C, double lo, double hi) {
  std::vector<double> r;
  if (A == 0.0) {
    if (B != 0.0) r.push_back(-C / B);
  } else {
    const double disc = B * B - 4.0 * A * C;
    if (disc >= 0.0) {
      const double s = std::sqrt(disc);
      const double q = -0.5 * (B + (B >= 0.0 ? s : -s));
      if (q != 0.0) {
        r.push_back(q / A);
        r.push_back(C / q);
      } else {
        r.push_back(0.0);
      }
    }
  }
  std::vector<double> out;
  for (double x : r) {
    if (x > lo && x < hi) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

double Law::quantile(double p) const {
  double lo = lower();
  double hi = upper();
  if (p <= 0.0 || cdf(lo) >= p) return lo;
  if (p > 1.0) return hi;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (cdf(mid) >= p) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

UniformLaw::UniformLaw(double a, double b) : a_(a), b_(b) {
  if (!(a < b)) fail(ErrorCode::kInvalidInput, "uniform law needs a < b");
}

double UniformLaw::cdf(double x) const {
  if (x <= a_) return 0.0;
  if (x >= b_) return 1.0;
  return (x - a_) / (b_ - a_);
}

double UniformLaw::quantile(double p) const {
  if (p <= 0.0) return a_;
  if (p >= 1.0) return b_;
  return a_ + p * (b_ - a_);
}

GLaw::GLaw(const LimitLawParams& params, double scale, double shift)
    : GLaw(g_closed_form(params), params.c, scale, shift) {}

GLaw::GLaw(PiecewiseQuadratic g, double c, double scale, double shift)
    : g_(std::move(g)), c_(c), scale_(scale), shift_(shift) {
  if (!(c > 0.0 && c <= 1.0)) fail(ErrorCode::kInvalidInput, "c must lie in (0,1]");
  if (!(scale > 0.0)) fail(ErrorCode::kInvalidInput, "scale must be positive");
  lo_ = scale_ * g_.min_on(0.0, c_) + shift_;
  hi_ = scale_ * g_.max_on(0.0, c_) + shift_;
}

double GLaw::measure(double t, bool strict) const {
  double total = 0.0;
  for (std::size_t i = 0; i < g_.pieces(); ++i) {
    const double lo = g_.breaks[i];
    const double hi = std::min(g_.breaks[i + 1], c_);
    if (lo >= hi) continue;
    const auto& k = g_.coef[i];
    std::vector<double> cuts = {lo};
    for (double r : roots_in(k[0], k[1], k[2] - t, lo, hi)) cuts.push_back(r);
    cuts.push_back(hi);
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
      const double mid = 0.5 * (cuts[j] + cuts[j + 1]);
      const double v = (k[0] * mid + k[1]) * mid + k[2] - t;
      if (v < 0.0 || (!strict && v == 0.0)) total += cuts[j + 1] - cuts[j];
    }
  }
  return total;
}

double GLaw::cdf(double x) const {
  if (x < lo_) return 0.0;
  if (x >= hi_) return 1.0;
  return std::clamp(measure((x - shift_) / scale_, false) / c_, 0.0, 1.0);
}

double GLaw::cdf_left(double x) const {
  if (x <= lo_) return 0.0;
  if (x > hi_) return 1.0;
  return std::clamp(measure((x - shift_) / scale_, true) / c_, 0.0, 1.0);
}

std::vector<double> GLaw::breakpoints() const {
  std::vector<double> out = {lo_, hi_};
  auto add = [&](double y) {
    if (y >= 0.0 && y <= c_) out.push_back(scale_ * g_(y) + shift_);
  };
  add(c_);
  for (std::size_t i = 0; i < g_.pieces(); ++i) {
    add(g_.breaks[i]);
    const auto& k = g_.coef[i];
    if (k[0] != 0.0) {
      const double v = -k[1] / (2.0 * k[0]);
      if (v > g_.breaks[i] && v < g_.breaks[i + 1]) add(v);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

StandardizedLaw::StandardizedLaw(std::shared_ptr<const Law> base) : base_(std::move(base)) {
  median_ = base_->median();
  iqr_ = base_->iqr();
  if (!(iqr_ > 0.0)) fail(ErrorCode::kDegenerateG, "interquartile range vanishes");
}

std::vector<double> StandardizedLaw::breakpoints() const {
  std::vector<double> out = base_->breakpoints();
  for (double& x : out) x = (x - median_) / iqr_;
  return out;
}

}  // namespace rotlab
