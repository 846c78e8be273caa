#include "rotlab/limit_law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rotlab/convergents.hpp"
#include "rotlab/error.hpp"
#include "rotlab/laws.hpp"

namespace rotlab {
namespace {

constexpr double kMergeTol = 1e-9;

double circ_dist(double a, double b) {
  double d = std::fabs(a - b);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

// Signed representative of b - a in [-1/2, 1/2).
double circ_offset(double a, double b) {
  double d = b - a;
  d -= std::floor(d + 0.5);
  return d;
}

double wrap(double x) {
  x -= std::floor(x);
  return x >= 1.0 ? 0.0 : x;
}

}  // namespace

BarLimits bar_limits(const std::vector<Digit>& digits, const TorusPoint& x0,
                     const std::vector<TorusPoint>& gammas,
                     const std::vector<std::size_t>& indices, BarMode mode, double radius) {
  if (indices.empty()) fail(ErrorCode::kInvalidInput, "bar limits need at least one index");
  const std::size_t top = *std::max_element(indices.begin(), indices.end());
  if (top > digits.size()) {
    fail(ErrorCode::kInvalidInput, "index " + std::to_string(top) + " exceeds the digit count");
  }
  const auto table = convergents(digits, top);
  std::vector<std::vector<Rational>> points;  // per index: x0, gamma_1, ...
  for (std::size_t n : indices) {
    const Integer& q = table[n].q;
    std::vector<Rational> row;
    row.push_back(frac(Rational(q) * x0.exact()));
    for (const auto& g : gammas) row.push_back(frac(Rational(q) * g.exact()));
    points.push_back(std::move(row));
  }
  const std::size_t dims = gammas.size() + 1;

  BarLimits out;
  out.certainty = mode;
  std::vector<double> limit(dims);
  if (mode == BarMode::kExact) {
    for (std::size_t i = 1; i < points.size(); ++i) {
      if (points[i] != points[0]) {
        fail(ErrorCode::kNoConvergence,
             "iota(q_n x) is not constant along the subsequence (index " +
                 std::to_string(indices[i]) + "); use clustered mode or a congruence plan");
      }
    }
    out.subsequence = indices;
    out.x0_bar = TorusPoint(points[0][0]);
    for (std::size_t d = 1; d < dims; ++d) out.gamma_bars.emplace_back(points[0][d]);
    for (std::size_t d = 0; d < dims; ++d) limit[d] = to_double(points[0][d]);
  } else {
    if (indices.size() < kMinClusterIndices) {
      fail(ErrorCode::kInvalidInput, "clustered bar limits need at least 8 indices");
    }
    if (!(radius > 0.0)) fail(ErrorCode::kInvalidInput, "cluster radius must be positive");
    std::vector<std::vector<double>> v;
    for (const auto& row : points) {
      std::vector<double> r;
      for (const auto& x : row) r.push_back(to_double(x));
      v.push_back(std::move(r));
    }
    std::vector<std::size_t> best;
    for (std::size_t c = 0; c < v.size(); ++c) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < v.size(); ++i) {
        bool inside = true;
        for (std::size_t d = 0; d < dims && inside; ++d) inside = circ_dist(v[i][d], v[c][d]) <= radius;
        if (inside) members.push_back(i);
      }
      if (members.size() > best.size()) best = std::move(members);
    }
    const std::size_t need = std::max<std::size_t>(3, indices.size() / 4);
    if (best.size() < need) {
      fail(ErrorCode::kNoConvergence,
           "no cluster of radius " + std::to_string(radius) + " with " + std::to_string(need) +
               " members among " + std::to_string(indices.size()) + " indices; add indices");
    }
    const std::size_t anchor = best.front();
    for (std::size_t d = 0; d < dims; ++d) {
      double mean = 0.0;
      for (std::size_t i : best) mean += circ_offset(v[anchor][d], v[i][d]);
      limit[d] = wrap(v[anchor][d] + mean / static_cast<double>(best.size()));
    }
    for (std::size_t i : best) {
      out.subsequence.push_back(indices[i]);
      for (std::size_t d = 0; d < dims; ++d) {
        out.radius = std::max(out.radius, circ_dist(v[i][d], limit[d]));
      }
    }
    out.x0_bar = TorusPoint::from_double(limit[0]);
    for (std::size_t d = 1; d < dims; ++d) out.gamma_bars.push_back(TorusPoint::from_double(limit[d]));
  }

  const double slack = mode == BarMode::kExact ? 0.0 : 2.0 * out.radius;
  out.separation = std::numeric_limits<double>::infinity();
  for (std::size_t d = 2; d < dims; ++d) {
    out.separation = std::min(out.separation, circ_dist(limit[d], limit[1]));
  }
  if (dims > 2 && !(out.separation > slack)) {
    fail(ErrorCode::kNoConvergence, "gamma_bar_i coincides with gamma_bar_1");
  }
  if (dims > 1 && gammas[0].exact() != 0) {
    const bool zero = mode == BarMode::kExact ? points[0][1] == 0 : circ_dist(limit[1], 0.0) <= slack;
    if (zero) fail(ErrorCode::kNoConvergence, "gamma_bar_1 vanishes although gamma_1 does not");
  }
  return out;
}

double LimitLawParams::total_jump() const {
  double s = 0.0;
  for (double h : H) s += h;
  return s;
}

void LimitLawParams::validate() const {
  if (H.size() != gamma_bar.size()) {
    fail(ErrorCode::kInvalidInput, "H and gamma_bar must have the same length");
  }
  double mass = 0.0;
  for (double h : H) {
    if (!std::isfinite(h)) fail(ErrorCode::kInvalidInput, "H must be finite");
    mass += std::fabs(h);
  }
  if (!(mass > 0.0)) fail(ErrorCode::kInvalidInput, "sum |H_i| must be positive");
  for (double g : gamma_bar) {
    if (!(g >= 0.0 && g < 1.0)) fail(ErrorCode::kInvalidInput, "gamma_bar must lie in [0,1)");
  }
  if (!(x0_bar >= 0.0 && x0_bar < 1.0)) fail(ErrorCode::kInvalidInput, "x0_bar must lie in [0,1)");
  if (!(c > 0.0 && c <= 1.0)) fail(ErrorCode::kInvalidInput, "c must lie in (0,1]");
}

LimitLawParams LimitLawParams::from_bars(const std::vector<Jump>& jumps, const BarLimits& bars,
                                         double c) {
  if (jumps.size() != bars.gamma_bars.size()) {
    fail(ErrorCode::kInvalidInput, "one bar limit per jump expected");
  }
  LimitLawParams p;
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    p.H.push_back(jumps[i].H);
    p.gamma_bar.push_back(bars.gamma_bars[i].value());
  }
  p.x0_bar = bars.x0_bar.value();
  p.c = c;
  return p;
}

std::size_t PiecewiseQuadratic::piece(double y) const {
  const auto it = std::upper_bound(breaks.begin(), breaks.end(), y);
  std::size_t i = it == breaks.begin() ? 0 : static_cast<std::size_t>(it - breaks.begin()) - 1;
  return std::min(i, coef.size() - 1);
}

double PiecewiseQuadratic::operator()(double y) const {
  const auto& k = coef[piece(y)];
  return (k[0] * y + k[1]) * y + k[2];
}

double PiecewiseQuadratic::derivative(double y) const {
  const auto& k = coef[piece(y)];
  return 2.0 * k[0] * y + k[1];
}

std::vector<double> PiecewiseQuadratic::kinks(double tol) const {
  std::vector<double> out;
  for (std::size_t i = 1; i < coef.size(); ++i) {
    const double b = breaks[i];
    const double left = 2.0 * coef[i - 1][0] * b + coef[i - 1][1];
    const double right = 2.0 * coef[i][0] * b + coef[i][1];
    if (std::fabs(left - right) > tol) out.push_back(b);
  }
  return out;
}

double PiecewiseQuadratic::min_on(double lo, double hi) const {
  double m = std::min((*this)(lo), (*this)(hi));
  for (std::size_t i = 0; i < coef.size(); ++i) {
    const double a = std::max(lo, breaks[i]);
    const double b = std::min(hi, breaks[i + 1]);
    if (a > b) continue;
    const auto& k = coef[i];
    m = std::min({m, (k[0] * a + k[1]) * a + k[2], (k[0] * b + k[1]) * b + k[2]});
    if (k[0] != 0.0) {
      const double v = -k[1] / (2.0 * k[0]);
      if (v > a && v < b) m = std::min(m, (k[0] * v + k[1]) * v + k[2]);
    }
  }
  return m;
}

double PiecewiseQuadratic::max_on(double lo, double hi) const {
  PiecewiseQuadratic neg = *this;
  for (auto& k : neg.coef) {
    for (auto& v : k) v = -v;
  }
  return -neg.min_on(lo, hi);
}

PiecewiseQuadratic g_closed_form(const LimitLawParams& params) {
  params.validate();
  const double a = params.x0_bar;
  const double S = params.total_jump();
  std::vector<double> cuts = {0.0, 1.0};
  if (a > 0.0) cuts.push_back(1.0 - a);
  for (double g : params.gamma_bar) {
    if (g > 0.0) cuts.push_back(wrap(g - a));
  }
  std::sort(cuts.begin(), cuts.end());
  PiecewiseQuadratic out;
  for (double x : cuts) {
    if (x < kMergeTol || x > 1.0 - kMergeTol) continue;
    if (!out.breaks.empty() && x - out.breaks.back() < kMergeTol) continue;
    out.breaks.push_back(x);
  }
  out.breaks.insert(out.breaks.begin(), 0.0);
  out.breaks.push_back(1.0);

  double value_at_lo = 0.0;
  for (std::size_t i = 0; i + 1 < out.breaks.size(); ++i) {
    const double lo = out.breaks[i];
    const double hi = out.breaks[i + 1];
    const double mid = 0.5 * (lo + hi);
    const double w = mid + a >= 1.0 ? 1.0 : 0.0;
    const double u = mid + a - w;
    double B = S * (a - w - 0.5);
    for (std::size_t j = 0; j < params.H.size(); ++j) {
      B += params.H[j] * ((u < params.gamma_bar[j] ? 1.0 : 0.0) - params.gamma_bar[j]);
    }
    const double A = 0.5 * S;
    const double C = value_at_lo - (A * lo + B) * lo;
    out.coef.push_back({A, B, C});
    value_at_lo = (A * hi + B) * hi + C;
  }
  double mass = 0.0;
  for (double h : params.H) mass += std::fabs(h);
  if (std::fabs(value_at_lo) > 1e-9 * (1.0 + mass)) {
    fail(ErrorCode::kInvalidInput, "closed form does not return to 0 at 1");
  }
  return out;
}

double g_pushforward_cdf(const LimitLawParams& params, double x) { return GLaw(params).cdf(x); }

std::vector<double> default_c_grid(std::size_t points) {
  if (points < 2) fail(ErrorCode::kInvalidInput, "c grid needs at least 2 points");
  std::vector<double> out;
  for (std::size_t i = 0; i < points; ++i) {
    out.push_back(static_cast<double>(i) / static_cast<double>(points - 1));
  }
  return out;
}

std::vector<ConvergenceRow> lemma_convergence_report(const JumpFunction& f,
                                                     const std::vector<LadderRung>& rungs,
                                                     const TorusPoint& x0,
                                                     const std::vector<double>& c_grid,
                                                     const SumOptions& options) {
  std::vector<TorusPoint> gammas;
  for (const auto& j : f.jumps) gammas.push_back(j.gamma);
  const Summand fn(f);
  const double var = fn.variation();
  std::vector<ConvergenceRow> out;
  for (const auto& rung : rungs) {
    if (rung.n < 1) fail(ErrorCode::kInvalidInput, "rung index must be >= 1");
    const auto digits = expand(rung.alpha, rung.n + 1);
    const auto table = convergents(digits, rung.n);
    ConvergenceRow row;
    row.n = rung.n;
    row.a_next = digits[rung.n];
    row.q_n = to_u64(table[rung.n].q);
    double digit_sum = 0.0;
    for (std::size_t i = 0; i < rung.n; ++i) digit_sum += static_cast<double>(digits[i]);
    row.budget = 2.0 * var * digit_sum / static_cast<double>(row.a_next);

    const auto bars = bar_limits(digits, x0, gammas, {rung.n}, BarMode::kExact);
    const auto g = g_closed_form(LimitLawParams::from_bars(f.jumps, bars));
    std::vector<double> cs;
    for (double c : c_grid) {
      if (!(c >= 0.0 && c <= 1.0)) fail(ErrorCode::kInvalidInput, "c grid values must lie in [0,1]");
      cs.push_back(c);
    }
    cs.insert(cs.end(), g.breaks.begin(), g.breaks.end());
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());

    std::vector<std::uint64_t> Ns;
    const Integer a_int = from_u64(row.a_next);
    for (double c : cs) {
      const Integer blocks = floor(rational_from_double(c) * Rational(a_int));
      Ns.push_back(to_u64(blocks) * row.q_n);
    }
    const auto sums = BirkhoffEngine(fn, rung.alpha, options).sums_at(x0, Ns);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const double normalized = sums[i] / static_cast<double>(row.a_next);
      const double target = g(cs[i]);
      const double err = std::fabs(normalized - target);
      if (err > row.sup_error) {
        row.sup_error = err;
        row.argmax_c = cs[i];
      }
      row.c.push_back(cs[i]);
      row.normalized.push_back(normalized);
      row.target.push_back(target);
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace rotlab
