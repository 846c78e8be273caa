#include "rotlab/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rotlab/error.hpp"

namespace rotlab {

EmpiricalCDF::EmpiricalCDF(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (std::isnan(v)) fail(ErrorCode::kInvalidInput, "NaN in empirical sample");
  }
  std::sort(values_.begin(), values_.end());
}

double EmpiricalCDF::cdf(double x) const {
  if (values_.empty()) return 0.0;
  const auto it = std::upper_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double EmpiricalCDF::cdf_left(double x) const {
  if (values_.empty()) return 0.0;
  const auto it = std::lower_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double EmpiricalCDF::quantile(double p) const {
  if (values_.empty()) fail(ErrorCode::kInvalidInput, "quantile of an empty sample");
  const double n = static_cast<double>(values_.size());
  const double pos = std::ceil(p * n) - 1.0;
  const std::size_t i =
      pos <= 0.0 ? 0 : std::min(values_.size() - 1, static_cast<std::size_t>(pos));
  return values_[i];
}

EmpiricalCDF EmpiricalCDF::standardized() const {
  const double m = median();
  const double s = iqr();
  if (!(s > 0.0)) fail(ErrorCode::kDegenerateG, "interquartile range vanishes");
  return affine(1.0 / s, -m / s);
}

EmpiricalCDF EmpiricalCDF::affine(double scale, double shift) const {
  std::vector<double> out(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) out[i] = scale * values_[i] + shift;
  return EmpiricalCDF(std::move(out));
}

EmpiricalCDF EmpiricalCDF::merge(const EmpiricalCDF& a, const EmpiricalCDF& b) {
  EmpiricalCDF out;
  out.values_.resize(a.size() + b.size());
  std::merge(a.values_.begin(), a.values_.end(), b.values_.begin(), b.values_.end(),
             out.values_.begin());
  return out;
}

Normalization Normalization::explicit_values(double A, double B) {
  if (!(B > 0.0) || !std::isfinite(A)) {
    fail(ErrorCode::kInvalidInput, "normalization needs finite A and B > 0");
  }
  return Normalization{NormalizationRule::kExplicit, A, B, 0};
}

Normalization Normalization::paper_tilde(const std::vector<Convergent>& table, std::uint64_t M) {
  if (M == 0) fail(ErrorCode::kInvalidInput, "normalization needs M >= 1");
  if (table.empty() || table.back().q <= from_u64(M)) {
    fail(ErrorCode::kInvalidInput, "convergent table does not reach M");
  }
  const std::size_t k = locate_convergent(table, from_u64(M));
  const std::size_t n = k - 1;
  Normalization out;
  out.rule = NormalizationRule::kPaperTilde;
  out.B = static_cast<double>(M) / to_double(Rational(table[n].q));
  out.n = n;
  return out;
}

Normalization Normalization::paper_tilde_anchored(const std::vector<Convergent>& table,
                                                  std::size_t n, std::uint64_t M) {
  if (M == 0) fail(ErrorCode::kInvalidInput, "normalization needs M >= 1");
  if (n >= table.size()) fail(ErrorCode::kInvalidInput, "anchor index outside the table");
  Normalization out;
  out.rule = NormalizationRule::kPaperTildeAnchored;
  out.B = static_cast<double>(M) / to_double(Rational(table[n].q));
  out.n = n;
  return out;
}

std::string to_string(NormalizationRule rule) {
  switch (rule) {
    case NormalizationRule::kExplicit: return "explicit";
    case NormalizationRule::kPaperTilde: return "paper_tilde";
    case NormalizationRule::kPaperTildeAnchored: return "paper_tilde_anchored";
  }
  return "explicit";
}

NormalizationRule parse_normalization_rule(const std::string& text) {
  if (text == "explicit") return NormalizationRule::kExplicit;
  if (text == "paper_tilde") return NormalizationRule::kPaperTilde;
  if (text == "paper_tilde_anchored") return NormalizationRule::kPaperTildeAnchored;
  fail(ErrorCode::kInvalidInput, "unknown normalization rule '" + text + "'");
}

EmpiricalCDF temporal_ecdf(const Summand& fn, const AlphaSpec& alpha, const TorusPoint& x0,
                           std::uint64_t M, const Normalization& norm,
                           const SumOptions& options) {
  if (M == 0) fail(ErrorCode::kInvalidInput, "temporal ECDF needs M >= 1");
  if (!(norm.B > 0.0)) fail(ErrorCode::kInvalidInput, "normalization needs B > 0");
  auto sums = BirkhoffEngine(fn, alpha, options).prefix_sums(x0, M);
  for (double& s : sums) s = (s - norm.A) / norm.B;
  return EmpiricalCDF(std::move(sums));
}

SubsequenceM subsequence_M(const Rational& c, Digit a_next, std::uint64_t q_n) {
  if (!(c > 0 && c <= 1)) fail(ErrorCode::kInvalidInput, "c must lie in (0,1]");
  if (q_n == 0) fail(ErrorCode::kInvalidInput, "q_n must be positive");
  const Integer blocks = floor(c * Rational(from_u64(a_next)));
  const Integer M = blocks * from_u64(q_n) + from_u64(q_n) - 1;
  SubsequenceM out;
  out.M = to_u64(M);
  out.blocks = to_u64(blocks);
  out.a_next = a_next;
  out.q_n = q_n;
  return out;
}

SubsequenceM subsequence_M(double c, std::size_t n, const AlphaSpec& alpha) {
  if (!(c > 0.0 && c <= 1.0)) fail(ErrorCode::kInvalidInput, "c must lie in (0,1]");
  const auto digits = expand(alpha, n + 1);
  const auto table = convergents(digits, n);
  return subsequence_M(rational_from_double(c), digits[n], to_u64(table[n].q));
}

double ks_distance(const EmpiricalCDF& F, const EmpiricalCDF& G) {
  const auto& a = F.values();
  const auto& b = G.values();
  if (a.empty() || b.empty()) {
    return a.empty() && b.empty() ? 0.0 : 1.0;
  }
  const double n = static_cast<double>(a.size());
  const double m = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() || j < b.size()) {
    double v;
    if (i == a.size()) {
      v = b[j];
    } else if (j == b.size()) {
      v = a[i];
    } else {
      v = std::min(a[i], b[j]);
    }
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return d;
}

double ks_distance(const EmpiricalCDF& F, const Law& G) {
  const auto& a = F.values();
  if (a.empty()) return 1.0;
  const double n = static_cast<double>(a.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < a.size()) {
    const double v = a[i];
    std::size_t k = i;
    while (k < a.size() && a[k] == v) ++k;
    d = std::max({d, std::fabs(static_cast<double>(k) / n - G.cdf(v)),
                  std::fabs(static_cast<double>(i) / n - G.cdf_left(v))});
    i = k;
  }
  return d;
}

double ks_distance(const Law& F, const EmpiricalCDF& G) { return ks_distance(G, F); }

double ks_distance(const Law& F, const Law& G) {
  constexpr int kGrid = 2048;
  std::vector<double> xs = F.breakpoints();
  const auto gb = G.breakpoints();
  xs.insert(xs.end(), gb.begin(), gb.end());
  for (int k = 1; k < kGrid; ++k) {
    const double p = static_cast<double>(k) / kGrid;
    xs.push_back(F.quantile(p));
    xs.push_back(G.quantile(p));
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  auto gap = [&](double x) { return std::fabs(F.cdf(x) - G.cdf(x)); };
  std::vector<double> vals(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    vals[i] = gap(xs[i]);
    d = std::max({d, vals[i], std::fabs(F.cdf_left(xs[i]) - G.cdf_left(xs[i]))});
  }
  // Golden-section refinement around the largest grid values.
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t top = std::min<std::size_t>(8, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                    [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (std::size_t t = 0; t < top; ++t) {
    const std::size_t i = order[t];
    double lo = xs[i == 0 ? 0 : i - 1];
    double hi = xs[std::min(i + 1, xs.size() - 1)];
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = gap(x1);
    double f2 = gap(x2);
    for (int it = 0; it < 60; ++it) {
      if (f1 >= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = gap(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = gap(x2);
      }
    }
    d = std::max({d, f1, f2});
  }
  return std::min(d, 1.0);
}

IsolatedResult isolated_multipliers(const std::vector<TorusPoint>& betas,
                                    std::optional<double> delta_opt, std::uint64_t N_max) {
  if (betas.empty()) fail(ErrorCode::kInvalidInput, "at least one beta is required");
  if (N_max == 0) fail(ErrorCode::kInvalidInput, "N_max must be positive");
  for (const auto& b : betas) {
    if (b.exact() == 0) fail(ErrorCode::kInvalidInput, "beta must be nonzero on the circle");
  }
  const double delta = delta_opt ? *delta_opt : 1.0 / (4.0 * static_cast<double>(betas.size()));
  if (!(delta > 0.0)) fail(ErrorCode::kInvalidInput, "delta must be positive");
  IsolatedResult out;
  out.delta = delta;
  out.N_max = N_max;

  using u128 = unsigned __int128;
  const Rational delta_q = rational_from_double(delta);
  struct Exact {
    std::uint64_t num;
    std::uint64_t den;
    std::vector<char> allowed;  // by residue of N num mod den
  };
  std::vector<Exact> exact;
  std::vector<u128> fixed;
  std::size_t irrational = 0;
  Integer modulus = 1;
  for (const auto& b : betas) {
    const Integer den = b.exact().get_den();
    if (den <= from_u64(N_max)) {
      Exact e;
      e.num = to_u64(b.exact().get_num());
      e.den = to_u64(den);
      e.allowed.resize(e.den);
      for (std::uint64_t r = 0; r < e.den; ++r) {
        const Rational dist(from_u64(std::min(r, e.den - r)), den);
        e.allowed[r] = dist > delta_q ? 1 : 0;
      }
      exact.push_back(std::move(e));
      mpz_lcm(modulus.get_mpz_t(), modulus.get_mpz_t(), den.get_mpz_t());
    } else {
      const Integer scaled = floor(b.exact() * Rational(pow2(128)));
      fixed.push_back((static_cast<u128>(to_u64(scaled >> 64)) << 64) |
                      to_u64(scaled - (Integer(scaled >> 64) << 64)));
      ++irrational;
    }
  }
  const bool modulus_fits = mpz_sizeinbase(modulus.get_mpz_t(), 2) <= 63;
  out.rational_modulus = modulus_fits ? to_u64(modulus) : 0;
  out.proof_bound = modulus_fits ? (1.0 - 2.0 * static_cast<double>(irrational) * delta) /
                                       static_cast<double>(out.rational_modulus)
                                 : 0.0;
  if (delta >= 0.5) {
    out.empty = true;
    return out;
  }
  const Integer delta_scaled = floor(delta_q * Rational(pow2(128)));
  const u128 delta_fixed = (static_cast<u128>(to_u64(delta_scaled >> 64)) << 64) |
                           to_u64(delta_scaled - (Integer(delta_scaled >> 64) << 64));

  std::vector<std::uint64_t> residues(exact.size(), 0);
  std::vector<u128> points(fixed.size(), 0);
  std::uint64_t count = 0;
  std::uint64_t congruent = 0;
  std::uint64_t congruent_members = 0;
  double lower = 1.0;
  const std::uint64_t half = (N_max + 1) / 2;
  for (std::uint64_t N = 1; N <= N_max; ++N) {
    bool ok = true;
    for (std::size_t i = 0; i < exact.size(); ++i) {
      residues[i] = (residues[i] + exact[i].num) % exact[i].den;
      ok = ok && exact[i].allowed[residues[i]];
    }
    for (std::size_t i = 0; i < fixed.size(); ++i) {
      points[i] += fixed[i];
      const u128 v = points[i];
      const u128 dist = std::min(v, static_cast<u128>(0) - v);
      ok = ok && dist > delta_fixed;
    }
    if (ok) {
      ++count;
      out.members.push_back(N);
    }
    if (modulus_fits && (N - 1) % out.rational_modulus == 0) {
      ++congruent;
      congruent_members += ok ? 1 : 0;
    }
    if (N >= half) lower = std::min(lower, static_cast<double>(count) / static_cast<double>(N));
  }
  out.density = static_cast<double>(count) / static_cast<double>(N_max);
  out.lower_density = lower;
  out.empty = count == 0;
  out.congruence_density =
      congruent == 0 ? 0.0 : static_cast<double>(congruent_members) / static_cast<double>(congruent);
  return out;
}

CriticalPair critical_pair(const PiecewiseQuadratic& g) {
  CriticalPair out;
  double sign = 1.0;
  {
    const double d0 = g.derivative(0.0);
    const double probe = d0 != 0.0 ? d0 : g(1e-6);
    if (probe == 0.0) fail(ErrorCode::kDegenerateG, "g is flat at 0");
    if (probe < 0.0) {
      sign = -1.0;
      out.flipped = true;
    }
  }
  auto h = [&](double y) { return sign * g(y); };
  // First point after `from` where sign * g' changes from `rising` to the
  // opposite direction, or 1.
  auto turn = [&](double from, bool rising) {
    for (std::size_t i = g.piece(from); i < g.pieces(); ++i) {
      const double lo = std::max(from, g.breaks[i]);
      const double hi = g.breaks[i + 1];
      const double A = sign * g.coef[i][0];
      const double B = sign * g.coef[i][1];
      const double d_lo = 2.0 * A * lo + B;
      if (lo > from && (rising ? d_lo <= 0.0 : d_lo >= 0.0)) return lo;
      const double d_hi = 2.0 * A * hi + B;
      if (rising ? d_hi < 0.0 : d_hi > 0.0) {
        const double v = -B / (2.0 * A);
        if (v > from) return v;
      }
    }
    return 1.0;
  };
  out.eps = turn(0.0, true);
  if (!(h(out.eps) > 0.0)) fail(ErrorCode::kDegenerateG, "g has no rising branch at 0");
  const double end = turn(out.eps, false);
  const double target = 0.5 * (std::max(0.0, h(end)) + h(out.eps));
  double lo = out.eps;
  double hi = end;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (h(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.delta = 0.5 * (lo + hi);
  return out;
}

RefutationReport tdlt_refutation(const LimitLawParams& params, std::optional<double> c1,
                                 std::optional<double> c2,
                                 const std::optional<EmpiricalSetup>& empirical) {
  LimitLawParams base = params;
  base.c = 1.0;
  const PiecewiseQuadratic g = g_closed_form(base);
  RefutationReport r;
  if (c1.has_value() != c2.has_value()) {
    fail(ErrorCode::kInvalidInput, "give both c1 and c2, or neither");
  }
  if (c1) {
    r.c1 = *c1;
    r.c2 = *c2;
    r.eps = r.c1;
    r.delta = r.c2;
  } else {
    const auto pair = critical_pair(g);
    r.automatic = true;
    r.c1 = r.eps = pair.eps;
    r.c2 = r.delta = pair.delta;
  }
  for (double c : {r.c1, r.c2}) {
    if (!(c > 0.0 && c <= 1.0)) fail(ErrorCode::kInvalidInput, "c must lie in (0,1]");
  }
  const double reach = std::max(r.c1, r.c2);
  if (g.max_on(0.0, reach) - g.min_on(0.0, reach) <= 1e-12) {
    fail(ErrorCode::kDegenerateG, "g is constant on [0, max(c1, c2)]");
  }
  auto law1 = std::make_shared<GLaw>(g, r.c1);
  auto law2 = std::make_shared<GLaw>(g, r.c2);
  const StandardizedLaw s1(law1);
  const StandardizedLaw s2(law2);
  r.ks_standardized = ks_distance(s1, s2);
  r.verdict = r.ks_standardized > kDistinctThreshold ? "distinct" : "same";

  if (empirical) {
    const auto& e = *empirical;
    const auto digits = expand(e.alpha, e.n + 1);
    const auto table = convergents(digits, e.n);
    auto check = [&](double c) {
      const auto sm = subsequence_M(rational_from_double(c), digits[e.n], to_u64(table[e.n].q));
      const auto norm = Normalization::paper_tilde_anchored(table, e.n, sm.M);
      const auto ecdf = temporal_ecdf(Summand(e.f), e.alpha, e.x0, sm.M, norm, e.options);
      return ks_distance(ecdf, GLaw(g, c, 1.0 / c));
    };
    r.ks_empirical_c1 = check(r.c1);
    r.ks_empirical_c2 = check(r.c2);
  }
  return r;
}

}  // namespace rotlab
