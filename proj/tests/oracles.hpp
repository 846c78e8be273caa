#pragma once

// Reference implementations that share no code with the library.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

// Continued fraction of (P + sqrt(D)) / Q by the classical integer
// recursion; requires Q | D - P^2.
inline std::vector<std::uint64_t> surd_digits(long P, long D, long Q, std::size_t count) {
  mpz_class p = P, d = D, q = Q;
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), d.get_mpz_t());
  std::vector<std::uint64_t> out;
  bool first = true;
  while (out.size() < count) {
    mpz_class num = p + root;  // Q > 0 throughout for reduced surds
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), q.get_mpz_t());
    if (!first) out.push_back(a.get_ui());
    first = false;
    p = a * q - p;
    q = (d - p * p) / q;
  }
  return out;
}

struct Row {
  mpz_class p;
  mpz_class q;
};

inline std::vector<Row> convergent_rows(const std::vector<std::uint64_t>& a, std::size_t K) {
  std::vector<Row> rows{{0, 1}};
  mpz_class p_prev = 1, q_prev = 0;
  for (std::size_t k = 1; k <= K; ++k) {
    const mpz_class p = a[k - 1] * rows.back().p + p_prev;
    const mpz_class q = a[k - 1] * rows.back().q + q_prev;
    p_prev = rows.back().p;
    q_prev = rows.back().q;
    rows.push_back({p, q});
  }
  return rows;
}

// alpha = (P + sqrt(D)) / Q as a rational within 10^-digits.
inline mpq_class surd_value(long P, long D, long Q, unsigned digits) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  mpz_class big = D * scale * scale;
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), big.get_mpz_t());
  mpq_class v(P * scale + r, Q * scale);
  v.canonicalize();
  return v;
}

inline mpq_class frac(const mpq_class& x) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return x - f;
}

// f(x) = {x} - 1/2
inline double sawtooth(const mpq_class& x) { return mpq_class(frac(x) - mpq_class(1, 2)).get_d(); }

// f(x) = 1_[0,g)({x}) - g
inline double indicator(const mpq_class& x, const mpq_class& g) {
  return (frac(x) < g ? 1.0 : 0.0) - g.get_d();
}

// Exact-orbit Birkhoff sum with a rational stand-in for alpha.
template <class F>
double naive_sum(F&& f, const mpq_class& alpha, const mpq_class& x0, std::uint64_t N) {
  double s = 0.0;
  mpq_class x = x0;
  for (std::uint64_t k = 0; k < N; ++k) {
    s += f(x);
    x = frac(x + alpha);
  }
  return s;
}

inline double torus_norm(double x) {
  const double f = x - std::floor(x);
  return std::min(f, 1.0 - f);
}

}  // namespace oracle
