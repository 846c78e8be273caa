#include "rotlab/convergents.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "rotlab/error.hpp"

namespace rotlab {
namespace {

struct PQ {
  std::vector<Integer> p;
  std::vector<Integer> q;
};

// p_k, q_k for k = 0..n from a_1..a_n.
PQ recurrence(const std::vector<Digit>& digits, std::size_t n) {
  PQ out;
  out.p.reserve(n + 1);
  out.q.reserve(n + 1);
  Integer p_prev = 1, q_prev = 0;
  out.p.emplace_back(0);
  out.q.emplace_back(1);
  for (std::size_t k = 1; k <= n; ++k) {
    const Integer a = from_u64(digits[k - 1]);
    Integer p = a * out.p.back() + p_prev;
    Integer q = a * out.q.back() + q_prev;
    p_prev = out.p.back();
    q_prev = out.q.back();
    out.p.push_back(std::move(p));
    out.q.push_back(std::move(q));
  }
  return out;
}

std::vector<Convergent> build_rows(const std::vector<Digit>& digits, std::size_t K,
                                   const PQ& pq, const Enclosure& alpha) {
  std::vector<Convergent> rows;
  rows.reserve(K + 1);
  for (std::size_t k = 0; k <= K; ++k) {
    Convergent c;
    c.k = k;
    c.a = k == 0 ? 0 : digits[k - 1];
    c.p = pq.p[k];
    c.q = pq.q[k];
    Rational at_lo = Rational(c.q) * alpha.lo - Rational(c.p);
    Rational at_hi = Rational(c.q) * alpha.hi - Rational(c.p);
    if (k % 2 == 1) {
      at_lo = -at_lo;
      at_hi = -at_hi;
    }
    at_lo.canonicalize();
    at_hi.canonicalize();
    c.delta_lo = std::min(at_lo, at_hi);
    c.delta_hi = std::max(at_lo, at_hi);
    rows.push_back(std::move(c));
  }
  return rows;
}

std::uint64_t q_mod_window(const std::vector<Digit>& digits, std::size_t k, std::uint64_t m) {
  std::uint64_t q_prev = 0, q = 1 % m;
  for (std::size_t i = 1; i <= k; ++i) {
    std::uint64_t next = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(digits[i - 1] % m) * q + q_prev) % m);
    q_prev = q;
    q = next;
  }
  return q;
}

}  // namespace

double Convergent::delta() const { return to_double((delta_lo + delta_hi) / 2); }

std::vector<Convergent> convergents(const std::vector<Digit>& digits, std::size_t K) {
  if (digits.size() < K) fail(ErrorCode::kInvalidInput, "convergents needs K digits");
  const std::size_t n = digits.size();
  PQ pq = recurrence(digits, n);
  Enclosure cyl;
  if (n == 0) {
    cyl = {Rational(0), Rational(1)};
  } else {
    Rational x(pq.p[n], pq.q[n]);
    Rational y(pq.p[n] + pq.p[n - 1], pq.q[n] + pq.q[n - 1]);
    x.canonicalize();
    y.canonicalize();
    cyl = x < y ? Enclosure{x, y} : Enclosure{y, x};
  }
  return build_rows(digits, K, pq, cyl);
}

std::vector<Convergent> convergents(const AlphaSpec& alpha, std::size_t K, unsigned bits) {
  std::vector<Digit> digits = K == 0 ? std::vector<Digit>{} : expand(alpha, K);
  PQ pq = recurrence(digits, K);
  unsigned need = bits + static_cast<unsigned>(mpz_sizeinbase(pq.q[K].get_mpz_t(), 2)) + 2;
  if (const auto* lit = std::get_if<PrecisionLiteral>(&alpha.variant())) {
    need = std::min(need, lit->bits - 1);
  }
  return build_rows(digits, K, pq, enclose(alpha, need));
}

DeltaBoundCheck check_delta_bounds(const Convergent& conv, Digit a_next) {
  if (conv.k < 1) fail(ErrorCode::kInvalidInput, "delta bounds need k >= 1");
  if (a_next == 0) fail(ErrorCode::kInvalidInput, "a_{k+1} must be positive");
  const Integer a = from_u64(a_next);
  Rational lower(1, (a + 2) * conv.q);
  Rational upper(1, a * conv.q);
  lower.canonicalize();
  upper.canonicalize();
  DeltaBoundCheck out;
  Rational ls = conv.delta_lo - lower;
  Rational us = upper - conv.delta_hi;
  out.lower_slack = to_double(ls);
  out.upper_slack = to_double(us);
  out.pass = sgn(ls) >= 0 && sgn(us) >= 0;
  return out;
}

std::size_t locate_convergent(const std::vector<Convergent>& table, const Integer& N) {
  if (N == 0) return 0;
  for (std::size_t k = 1; k < table.size(); ++k) {
    if (N < table[k].q && table[k - 1].q <= N) return k;
  }
  fail(ErrorCode::kInvalidInput, "convergent table too short to locate N = " + to_string(N));
}

void IndexPlan::validate() const {
  if (!(theta > 0)) fail(ErrorCode::kInvalidInput, "plan theta must be positive");
  for (std::size_t i = 0; i < target_indices.size(); ++i) {
    const std::size_t k = target_indices[i];
    if (k < 1) fail(ErrorCode::kInvalidInput, "plan targets must be >= 1");
    if (i > 0 && k <= target_indices[i - 1]) {
      fail(ErrorCode::kInvalidInput, "plan targets must be strictly increasing");
    }
    const bool even = k % 2 == 0;
    if (even != (parity == Parity::kEven)) {
      fail(ErrorCode::kInvalidInput,
           "plan target " + std::to_string(k) + " does not match the parity flag");
    }
  }
  for (const auto& [idx, value] : forced_quotients) {
    if (value == 0) fail(ErrorCode::kInvalidInput, "forced quotient must be positive");
    if (idx == 0 || std::find(target_indices.begin(), target_indices.end(), idx - 1) ==
                        target_indices.end()) {
      fail(ErrorCode::kInvalidInput, "forced quotient at " + std::to_string(idx) +
                                         " does not follow a target index");
    }
  }
  if (congruence) {
    if (congruence->modulus < 1 || congruence->modulus > 100) {
      fail(ErrorCode::kInvalidInput, "congruence modulus must be in [1, 100]");
    }
    if (congruence->residue >= congruence->modulus) {
      fail(ErrorCode::kInvalidInput, "congruence residue must be below the modulus");
    }
  }
  if (search_radius > 12) fail(ErrorCode::kInvalidInput, "search radius above 12");
}

ConstructedAlpha construct_alpha(const IndexPlan& plan) {
  plan.validate();
  const std::size_t length = plan.target_indices.empty() ? 0 : plan.target_indices.back() + 1;
  std::vector<Digit> digits(length, 1);
  for (const auto& [idx, value] : plan.forced_quotients) digits[idx - 1] = value;

  std::vector<TargetReport> reports;
  std::size_t prev = 0;
  for (std::size_t k : plan.target_indices) {
    TargetReport rep;
    rep.k = k;
    const double a_next = static_cast<double>(digits[k]);
    auto ratio_ok = [&](const std::vector<Digit>& d) {
      double sum = 0;
      for (std::size_t i = 0; i < k; ++i) sum += static_cast<double>(d[i]);
      return sum <= plan.theta * a_next;
    };
    if (plan.congruence) {
      const std::uint64_t m = plan.congruence->modulus;
      const std::uint64_t r = plan.congruence->residue;
      // Free positions in [prev + 2, k]: q_prev and the forced a_{prev+1} stay.
      std::vector<std::size_t> window;
      const std::size_t lowest = prev == 0 ? 1 : prev + 2;
      for (std::size_t j = k; j >= lowest && window.size() < plan.search_radius; --j) {
        if (!plan.forced_quotients.count(j)) window.push_back(j);
      }
      std::reverse(window.begin(), window.end());
      std::size_t combos = 1;
      for (std::size_t i = 0; i < window.size(); ++i) combos *= 3;
      std::optional<std::tuple<std::size_t, Digit, std::size_t>> best;  // changes, sum, code
      std::vector<Digit> trial = digits;
      for (std::size_t code = 0; code < combos; ++code) {
        std::size_t c = code, changes = 0;
        Digit sum = 0;
        for (std::size_t pos : window) {
          const Digit v = 1 + c % 3;
          c /= 3;
          trial[pos - 1] = v;
          changes += v != 1;
          sum += v;
        }
        if (q_mod_window(trial, k, m) != r || !ratio_ok(trial)) continue;
        auto key = std::make_tuple(changes, sum, code);
        if (!best || key < *best) best = key;
      }
      if (!best) {
        fail(ErrorCode::kConstructionFailed,
             "no digits in {1,2,3} over a radius of " + std::to_string(window.size()) +
                 " put q_" + std::to_string(k) + " in class " + std::to_string(r) + " mod " +
                 std::to_string(m));
      }
      std::size_t c = std::get<2>(*best);
      for (std::size_t pos : window) {
        const Digit v = 1 + c % 3;
        c /= 3;
        if (v != 1) rep.adjusted_positions.push_back(pos);
        digits[pos - 1] = v;
      }
      rep.radius_used = window.size();
      rep.q_mod = q_mod_window(digits, k, m);
    }
    double sum = 0;
    for (std::size_t i = 0; i < k; ++i) sum += static_cast<double>(digits[i]);
    rep.ratio = sum / a_next;
    if (!(rep.ratio <= plan.theta)) {
      fail(ErrorCode::kConstructionFailed,
           "ratio at k = " + std::to_string(k) + " is " + std::to_string(rep.ratio) +
               " > theta; force a larger a_" + std::to_string(k + 1));
    }
    reports.push_back(std::move(rep));
    prev = k;
  }

  DigitRule rule;
  rule.prefix = digits;
  rule.tail = TailRule::constant(1);
  rule.forced = plan.forced_quotients;
  return {AlphaSpec(std::move(rule)), std::move(digits), std::move(reports)};
}

QPredicate congruent_to(std::uint64_t residue, std::uint64_t modulus) {
  if (modulus == 0) fail(ErrorCode::kInvalidInput, "modulus must be positive");
  return [residue, modulus](const Integer& q) {
    Integer r;
    mpz_fdiv_r_ui(r.get_mpz_t(), q.get_mpz_t(), modulus);
    return r == from_u64(residue % modulus);
  };
}

QPredicate accept_all() {
  return [](const Integer&) { return true; };
}

std::vector<std::size_t> find_good_indices(const std::vector<Digit>& digits, std::size_t K,
                                           const QPredicate& accept, double theta,
                                           Parity parity) {
  if (digits.size() < K) fail(ErrorCode::kInvalidInput, "find_good_indices needs K digits");
  std::vector<std::size_t> out;
  const bool unbounded = std::isinf(theta) && theta > 0;
  PQ pq = recurrence(digits, K);
  double prefix_sum = 0;
  for (std::size_t k = 1; k <= K; ++k) {
    prefix_sum += static_cast<double>(digits[k - 1]);
    if (k < 2 || (k % 2 == 0) != (parity == Parity::kEven)) continue;
    if (!accept(pq.q[k])) continue;
    if (unbounded) {
      out.push_back(k);
      continue;
    }
    if (k >= digits.size()) continue;
    if (prefix_sum <= theta * static_cast<double>(digits[k])) out.push_back(k);
  }
  return out;
}

}  // namespace rotlab
