#include "rotlab/rational.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

#include "rotlab/error.hpp"

namespace rotlab {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (ch < '0' || ch > '9') return false;
  }
  return true;
}

Integer pow10(unsigned exponent) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), 10, exponent);
  return out;
}

Rational parse_decimal(std::string_view text) {
  std::string_view mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    std::string_view exp_text = text.substr(e + 1);
    if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
    if (ec != std::errc{} || ptr != exp_text.data() + exp_text.size()) {
      fail(ErrorCode::kInvalidInput, "bad exponent in '" + std::string(text) + "'");
    }
  }
  std::string_view int_part = mantissa;
  std::string_view frac_part;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    int_part = mantissa.substr(0, dot);
    frac_part = mantissa.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) {
    fail(ErrorCode::kInvalidInput, "empty number '" + std::string(text) + "'");
  }
  if ((!int_part.empty() && !all_digits(int_part)) ||
      (!frac_part.empty() && !all_digits(frac_part))) {
    fail(ErrorCode::kInvalidInput, "not a decimal literal: '" + std::string(text) + "'");
  }
  std::string digits = std::string(int_part) + std::string(frac_part);
  Integer numerator(digits.empty() ? "0" : digits, 10);
  long scale = static_cast<long>(frac_part.size()) - exponent;
  Rational out;
  if (scale >= 0) {
    out = Rational(numerator, pow10(static_cast<unsigned>(scale)));
  } else {
    out = Rational(numerator * pow10(static_cast<unsigned>(-scale)));
  }
  out.canonicalize();
  return out;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) fail(ErrorCode::kInvalidInput, "empty rational literal");
  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Rational out;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      fail(ErrorCode::kInvalidInput, "not a fraction: '" + std::string(text) + "'");
    }
    Integer d(std::string(den), 10);
    if (d == 0) fail(ErrorCode::kInvalidInput, "zero denominator in '" + std::string(text) + "'");
    out = Rational(Integer(std::string(num), 10), d);
    out.canonicalize();
  } else {
    out = parse_decimal(text);
  }
  return negative ? Rational(-out) : out;
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) fail(ErrorCode::kInvalidInput, "non-finite value");
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) fail(ErrorCode::kInvalidInput, "cannot format double");
  return parse_rational(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

Integer floor(const Rational& x) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return out;
}

Rational frac(const Rational& x) {
  Rational out = x - Rational(floor(x));
  out.canonicalize();
  return out;
}

double to_double(const Rational& x) { return mpq_get_d(x.get_mpq_t()); }

long double to_long_double(const Rational& x) {
  if (sgn(x) == 0) return 0.0L;
  Integer num = abs(x.get_num());
  Integer den = x.get_den();
  long k = 64 - (static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) -
                 static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2)));
  if (k >= 0) {
    num <<= static_cast<unsigned long>(k);
  } else {
    den <<= static_cast<unsigned long>(-k);
  }
  Integer q = num / den;
  while (mpz_sizeinbase(q.get_mpz_t(), 2) > 64) {
    q >>= 1;
    --k;
  }
  long double out = std::ldexp(static_cast<long double>(to_u64(q)), static_cast<int>(-k));
  return sgn(x) < 0 ? -out : out;
}

double log_integer(const Integer& n) {
  if (sgn(n) <= 0) fail(ErrorCode::kInvalidInput, "log of non-positive integer");
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

Integer pow2(unsigned exponent) {
  Integer out = 1;
  out <<= exponent;
  return out;
}

std::uint64_t to_u64(const Integer& n) {
  if (sgn(n) < 0 || mpz_sizeinbase(n.get_mpz_t(), 2) > 64) {
    fail(ErrorCode::kInvalidInput, "integer does not fit in 64 bits");
  }
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, n.get_mpz_t());
  return out;
}

Integer from_u64(std::uint64_t v) {
  Integer out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return out;
}

std::string to_string(const Integer& n) { return n.get_str(10); }

std::string to_string(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str(10);
  return x.get_str(10);
}

}  // namespace rotlab
