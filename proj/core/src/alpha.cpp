#include "rotlab/alpha.hpp"

#include "rotlab/error.hpp"

namespace rotlab {
namespace {

// Exact state x = (P + sqrt(D)) / Q of the surd expansion; Q | D - P^2.
class SurdExpander {
 public:
  explicit SurdExpander(const QuadraticSurd& s) : p_(s.p), d_(s.d), q_(s.q) {
    if (q_ == 0) fail(ErrorCode::kInvalidInput, "surd denominator is zero");
    if (d_ <= 0) fail(ErrorCode::kInvalidInput, "surd radicand must be positive");
    if (mpz_perfect_square_p(d_.get_mpz_t())) {
      fail(ErrorCode::kRationalInput, "surd radicand is a perfect square");
    }
    Integer rem = d_ - p_ * p_;
    if (!mpz_divisible_p(rem.get_mpz_t(), q_.get_mpz_t())) {
      Integer aq = abs(q_);
      p_ *= aq;
      d_ *= q_ * q_;
      q_ *= aq;
    }
    mpz_sqrt(s_.get_mpz_t(), d_.get_mpz_t());
    if (floor_value() != 0) {
      fail(ErrorCode::kInvalidInput, "surd must lie strictly between 0 and 1");
    }
    advance(0);
  }

  Digit next() {
    Integer a = floor_value();
    advance(a);
    return to_u64(a);
  }

 private:
  // floor((P + sqrt D) / Q); sqrt D is irrational.
  Integer floor_value() const {
    Integer num = p_ + s_;
    Integer out;
    if (q_ > 0) {
      mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), q_.get_mpz_t());
    } else {
      Integer aq = -q_;
      mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), aq.get_mpz_t());
      out = -out - 1;
    }
    return out;
  }

  // x <- 1 / (x - a)
  void advance(const Integer& a) {
    p_ = a * q_ - p_;
    Integer rem = d_ - p_ * p_;
    q_ = rem / q_;
  }

  Integer p_, d_, q_, s_;
};

struct LiteralParts {
  Rational value;
  Rational ulp;
};

LiteralParts parse_literal(const PrecisionLiteral& lit) {
  if (lit.bits < 8) fail(ErrorCode::kInvalidInput, "literal precision below 8 bits");
  Rational value = parse_rational(lit.decimal);
  if (value <= 0 || value >= 1) {
    fail(ErrorCode::kInvalidInput, "literal alpha must lie strictly between 0 and 1");
  }
  return {value, Rational(1, pow2(lit.bits))};
}

// One Euclid step on x in (0,1): returns floor(1/x), leaves x = {1/x}.
Integer euclid_step(Rational& x) {
  Rational inv(x.get_den(), x.get_num());
  Integer a = floor(inv);
  x = inv - Rational(a);
  x.canonicalize();
  return a;
}

}  // namespace

TailRule TailRule::constant(Digit v) {
  TailRule t;
  t.kind = Kind::kConstant;
  t.value = v;
  return t;
}

TailRule TailRule::periodic(std::vector<Digit> p) {
  TailRule t;
  t.kind = Kind::kPeriodic;
  t.period = std::move(p);
  return t;
}

TailRule TailRule::custom(std::function<Digit(std::size_t)> fn) {
  TailRule t;
  t.kind = Kind::kIndexed;
  t.indexed = std::move(fn);
  return t;
}

Digit DigitRule::digit(std::size_t k) const {
  if (k == 0) fail(ErrorCode::kInvalidInput, "digits are indexed from 1");
  Digit out = 0;
  if (auto it = forced.find(k); it != forced.end()) {
    out = it->second;
  } else if (k <= prefix.size()) {
    out = prefix[k - 1];
  } else {
    switch (tail.kind) {
      case TailRule::Kind::kConstant:
        out = tail.value;
        break;
      case TailRule::Kind::kPeriodic:
        if (tail.period.empty()) fail(ErrorCode::kInvalidInput, "empty periodic tail");
        out = tail.period[(k - prefix.size() - 1) % tail.period.size()];
        break;
      case TailRule::Kind::kIndexed:
        if (!tail.indexed) fail(ErrorCode::kInvalidInput, "indexed tail without a rule");
        out = tail.indexed(k);
        break;
    }
  }
  if (out == 0) fail(ErrorCode::kInvalidInput, "digit a_" + std::to_string(k) + " is zero");
  return out;
}

AlphaSpec::AlphaSpec(DigitRule rule) : v_(std::move(rule)) {}
AlphaSpec::AlphaSpec(QuadraticSurd surd) : v_(std::move(surd)) {}
AlphaSpec::AlphaSpec(PrecisionLiteral literal) : v_(std::move(literal)) {}

AlphaSpec AlphaSpec::golden() { return QuadraticSurd{Integer(-1), Integer(5), Integer(2)}; }

AlphaSpec AlphaSpec::sqrt2_minus_1() { return QuadraticSurd{Integer(-1), Integer(2), Integer(1)}; }

AlphaSpec AlphaSpec::from_digits(std::vector<Digit> digits, Digit tail) {
  DigitRule rule;
  rule.prefix = std::move(digits);
  rule.tail = TailRule::constant(tail);
  return rule;
}

std::vector<Digit> rational_digits(const Rational& x, std::size_t max_digits) {
  std::vector<Digit> out;
  Rational r = frac(x);
  while (r != 0 && out.size() < max_digits) out.push_back(to_u64(euclid_step(r)));
  return out;
}

std::vector<Digit> common_digits(const Rational& lo, const Rational& hi, std::size_t max_digits) {
  std::vector<Digit> out;
  Rational a = lo;
  Rational b = hi;
  if (a <= 0 || b >= 1 || a > b) return out;
  while (out.size() < max_digits) {
    Integer da = euclid_step(a);
    Integer db = euclid_step(b);
    if (da != db || a == 0 || b == 0) break;
    out.push_back(to_u64(da));
  }
  return out;
}

std::vector<Digit> expand(const AlphaSpec& alpha, std::size_t K) {
  if (K == 0) fail(ErrorCode::kInvalidInput, "expand needs K >= 1");
  std::vector<Digit> out;
  out.reserve(K);
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, DigitRule>) {
          for (std::size_t k = 1; k <= K; ++k) out.push_back(v.digit(k));
        } else if constexpr (std::is_same_v<T, QuadraticSurd>) {
          SurdExpander e(v);
          for (std::size_t k = 1; k <= K; ++k) out.push_back(e.next());
        } else {
          auto parts = parse_literal(v);
          auto exact = rational_digits(parts.value, K);
          if (exact.size() < K) {
            throw RationalInputError(exact, "literal " + v.decimal + " terminates after " +
                                                std::to_string(exact.size()) + " digits");
          }
          out = common_digits(parts.value - parts.ulp, parts.value + parts.ulp, K);
          if (out.size() < K) {
            fail(ErrorCode::kPrecisionExhausted,
                 "literal certifies only " + std::to_string(out.size()) + " digits at " +
                     std::to_string(v.bits) + " bits, " + std::to_string(K) + " requested");
          }
        }
      },
      alpha.variant());
  return out;
}

std::size_t certified_digit_count(const AlphaSpec& alpha, std::size_t cap) {
  if (const auto* lit = std::get_if<PrecisionLiteral>(&alpha.variant())) {
    auto parts = parse_literal(*lit);
    return common_digits(parts.value - parts.ulp, parts.value + parts.ulp, cap).size();
  }
  return cap;
}

Enclosure enclose(const AlphaSpec& alpha, unsigned bits) {
  if (const auto* lit = std::get_if<PrecisionLiteral>(&alpha.variant())) {
    auto parts = parse_literal(*lit);
    if (bits + 1 > lit->bits) {
      fail(ErrorCode::kPrecisionExhausted, "literal carries " + std::to_string(lit->bits) +
                                               " bits, enclosure of 2^-" + std::to_string(bits) +
                                               " requested");
    }
    return {parts.value - parts.ulp, parts.value + parts.ulp};
  }
  // Cylinder of the first K digits: alpha lies between p_K/q_K and
  // (p_K + p_{K-1}) / (q_K + q_{K-1}); width 1 / (q_K (q_K + q_{K-1})).
  const Integer target = pow2(bits);
  Integer p_prev = 1, q_prev = 0;  // p_{-1}, q_{-1}
  Integer p = 0, q = 1;            // p_0, q_0
  std::size_t k = 0;
  std::optional<SurdExpander> surd;
  if (const auto* s = std::get_if<QuadraticSurd>(&alpha.variant())) surd.emplace(*s);
  const auto* rule = std::get_if<DigitRule>(&alpha.variant());
  while (q * (q + q_prev) < target) {
    ++k;
    const Integer a = from_u64(surd ? surd->next() : rule->digit(k));
    Integer p_next = a * p + p_prev;
    Integer q_next = a * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
  }
  Rational x(p, q);
  Rational y(p + p_prev, q + q_prev);
  x.canonicalize();
  y.canonicalize();
  return x < y ? Enclosure{x, y} : Enclosure{y, x};
}

}  // namespace rotlab
