#include "rotlab/birkhoff.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>

#include "rotlab/error.hpp"
#include "rotlab/parallel.hpp"

namespace rotlab {
namespace {

using u128 = unsigned __int128;

constexpr std::uint64_t kChunk = std::uint64_t{1} << 16;
constexpr unsigned kMaxBits = 4096;

struct Acc {
  std::int64_t whole = 0;  // sum of iota, integer part
  u128 frac = 0;           // sum of iota, fraction in units of 2^-128
  std::vector<std::int64_t> counts;
  long double smooth = 0.0L;
  long double comp = 0.0L;
  std::uint64_t n = 0;

  void add_smooth(long double v) {
    const long double t = smooth + v;
    if (std::fabs(smooth) >= std::fabs(v)) {
      comp += (smooth - t) + v;
    } else {
      comp += (v - t) + smooth;
    }
    smooth = t;
  }

  void merge(const Acc& o) {
    const u128 f = frac + o.frac;
    whole += o.whole + (f < frac ? 1 : 0);
    frac = f;
    if (counts.size() < o.counts.size()) counts.resize(o.counts.size(), 0);
    for (std::size_t i = 0; i < o.counts.size(); ++i) counts[i] += o.counts[i];
    add_smooth(o.smooth);
    add_smooth(o.comp);
    n += o.n;
  }
};

struct Term {
  double H = 0.0;
  u128 gamma128 = 0;  // top 128 bits of the fixed-point gamma
};

// Kernel-independent data for one working width.
struct Setup {
  unsigned W = 0;
  Integer alpha_hat;
  Integer x0_hat;
  std::vector<Integer> term_points;
  std::vector<Integer> walls;
  Integer tol;  // collision tolerance in units of 2^-W
  bool refinable = true;
};

struct Collision {
  std::uint64_t index;
};

Integer scaled_floor(const Rational& x, unsigned W) {
  const Rational y = frac(x) * Rational(pow2(W));
  Integer out = floor(y);
  if (out == pow2(W)) out = 0;
  return out;
}

template <std::size_t L>
using Limbs = std::array<std::uint64_t, L>;

template <std::size_t L>
Limbs<L> to_limbs(const Integer& v) {
  Limbs<L> out{};
  std::size_t count = 0;
  mpz_export(out.data(), &count, -1, sizeof(std::uint64_t), 0, 0, v.get_mpz_t());
  return out;
}

template <std::size_t L>
inline void add_to(Limbs<L>& a, const Limbs<L>& b) {
  unsigned char carry = 0;
  for (std::size_t i = 0; i < L; ++i) {
    const u128 s = static_cast<u128>(a[i]) + b[i] + carry;
    a[i] = static_cast<std::uint64_t>(s);
    carry = static_cast<unsigned char>(s >> 64);
  }
}

template <std::size_t L>
inline Limbs<L> sub(const Limbs<L>& a, const Limbs<L>& b) {
  Limbs<L> out{};
  unsigned char borrow = 0;
  for (std::size_t i = 0; i < L; ++i) {
    const u128 d = static_cast<u128>(a[i]) - b[i] - borrow;
    out[i] = static_cast<std::uint64_t>(d);
    borrow = static_cast<unsigned char>((d >> 64) != 0 ? 1 : 0);
  }
  return out;
}

template <std::size_t L>
inline Limbs<L> mul_small(const Limbs<L>& a, std::uint64_t k) {
  Limbs<L> out{};
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < L; ++i) {
    const u128 p = static_cast<u128>(a[i]) * k + carry;
    out[i] = static_cast<std::uint64_t>(p);
    carry = static_cast<std::uint64_t>(p >> 64);
  }
  return out;
}

template <std::size_t L>
inline bool less(const Limbs<L>& a, const Limbs<L>& b) {
  for (std::size_t i = L; i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

template <std::size_t L>
inline bool less_equal(const Limbs<L>& a, const Limbs<L>& b) {
  return !less(b, a);
}

template <std::size_t L>
inline u128 top128(const Limbs<L>& a) {
  return (static_cast<u128>(a[L - 1]) << 64) | a[L - 2];
}

inline double unit_double(std::uint64_t top) {
  const double x = std::ldexp(static_cast<double>(top >> 11), -53);
  return x;
}

template <std::size_t L>
class Kernel {
 public:
  Kernel(const Setup& s, const Summand& fn) : fn_(fn) {
    alpha_ = to_limbs<L>(s.alpha_hat);
    x0_ = to_limbs<L>(s.x0_hat);
    for (const auto& g : s.term_points) gammas_.push_back(to_limbs<L>(g));
    for (const auto& w : s.walls) walls_.push_back(to_limbs<L>(w));
    tol_ = to_limbs<L>(s.tol);
    coarse_ = tol_[L - 1] + 1;
  }

  Limbs<L> point(std::uint64_t j) const {
    Limbs<L> p = mul_small<L>(alpha_, j);
    add_to<L>(p, x0_);
    return p;
  }

  // Adds orbit points j in [from, to) to acc; on_step(j, acc) after each.
  template <class OnStep>
  void run(std::uint64_t from, std::uint64_t to, Acc& acc, bool check, OnStep&& on_step) const {
    acc.counts.resize(gammas_.size(), 0);
    Limbs<L> x = point(from);
    const bool smooth = !fn_.smooth.empty();
    for (std::uint64_t j = from; j < to; ++j) {
      if (check) check_walls(x, j);
      const u128 t = top128<L>(x);
      const u128 f = acc.frac + t;
      acc.whole += f < acc.frac ? 1 : 0;
      acc.frac = f;
      for (std::size_t i = 0; i < gammas_.size(); ++i) {
        acc.counts[i] += less<L>(x, gammas_[i]) ? 1 : 0;
      }
      if (smooth) {
        double r = 0.0;
        const double u = unit_double(x[L - 1]);
        for (auto it = fn_.smooth.rbegin(); it != fn_.smooth.rend(); ++it) r = r * u + *it;
        acc.add_smooth(r);
      }
      ++acc.n;
      on_step(j, acc);
      add_to<L>(x, alpha_);
    }
  }

  std::vector<double> orbit(std::uint64_t from, std::uint64_t count) const {
    std::vector<double> out(count);
    Limbs<L> x = point(from);
    for (std::uint64_t j = 0; j < count; ++j) {
      out[j] = unit_double(x[L - 1]);
      add_to<L>(x, alpha_);
    }
    return out;
  }

 private:
  void check_walls(const Limbs<L>& x, std::uint64_t j) const {
    for (const auto& w : walls_) {
      const std::uint64_t d = x[L - 1] - w[L - 1];
      if (d > coarse_ && d < 0 - coarse_) continue;
      const Limbs<L> up = sub<L>(x, w);
      const Limbs<L> down = sub<L>(w, x);
      if (less_equal<L>(up, tol_) || less_equal<L>(down, tol_)) throw Collision{j};
    }
  }

  const Summand& fn_;
  Limbs<L> alpha_{};
  Limbs<L> x0_{};
  std::vector<Limbs<L>> gammas_;
  std::vector<Limbs<L>> walls_;
  Limbs<L> tol_{};
  std::uint64_t coarse_ = 0;
};

// Turns accumulated integers into the value of the summed function.
class Valuer {
 public:
  Valuer(const Summand& fn, const std::vector<Term>& terms) : fn_(fn), terms_(terms) {}

  long double operator()(const Acc& acc) const { return (*this)(acc, Acc{}); }

  // Value of the concatenation of two accumulated ranges.
  long double operator()(const Acc& a, const Acc& b) const {
    const u128 f = a.frac + b.frac;
    const std::int64_t whole_sum = a.whole + b.whole + (f < a.frac ? 1 : 0);
    const std::uint64_t n = a.n + b.n;
    const long double half_n = static_cast<long double>(n) * 0.5L;
    const long double centered =
        (static_cast<long double>(whole_sum) - half_n) +
        std::ldexp(static_cast<long double>(static_cast<std::uint64_t>(f >> 64)), -64);
    long double out = static_cast<long double>(fn_.total_jump) * centered;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      const std::int64_t count = (i < a.counts.size() ? a.counts[i] : 0) +
                                 (i < b.counts.size() ? b.counts[i] : 0);
      // count_i - n gamma_i with n gamma_i split exactly into integer and
      // fractional parts.
      const std::uint64_t gh = static_cast<std::uint64_t>(terms_[i].gamma128 >> 64);
      const std::uint64_t gl = static_cast<std::uint64_t>(terms_[i].gamma128);
      const u128 p1 = static_cast<u128>(n) * gl;
      const u128 p2 = static_cast<u128>(n) * gh;
      const u128 mid = (p1 >> 64) + static_cast<std::uint64_t>(p2);
      const std::uint64_t int_part =
          static_cast<std::uint64_t>(p2 >> 64) + static_cast<std::uint64_t>(mid >> 64);
      const long double frac_part =
          std::ldexp(static_cast<long double>(static_cast<std::uint64_t>(mid)), -64);
      const long double diff =
          static_cast<long double>(count - static_cast<std::int64_t>(int_part)) - frac_part;
      out += static_cast<long double>(terms_[i].H) * diff;
    }
    return out + ((a.smooth + b.smooth) + (a.comp + b.comp));
  }

 private:
  const Summand& fn_;
  const std::vector<Term>& terms_;
};

// Terms with a count and the set of genuine discontinuities.
struct Layout {
  std::vector<Jump> terms;
  std::vector<TorusPoint> walls;
};

Layout layout(const Summand& fn) {
  std::vector<Jump> sorted = fn.terms;
  std::sort(sorted.begin(), sorted.end(),
            [](const Jump& a, const Jump& b) { return a.gamma < b.gamma; });
  Layout out;
  double away = 0.0;
  double scale = std::fabs(fn.total_jump);
  for (const auto& j : sorted) {
    scale += std::fabs(j.H);
    if (j.gamma.exact() == 0) continue;
    if (!out.terms.empty() && out.terms.back().gamma == j.gamma) {
      out.terms.back().H += j.H;
    } else {
      out.terms.push_back(j);
    }
    away += j.H;
  }
  out.terms.erase(std::remove_if(out.terms.begin(), out.terms.end(),
                                 [](const Jump& j) { return j.H == 0.0; }),
                  out.terms.end());
  if (std::fabs(fn.total_jump - away) > 1e-14 * scale) out.walls.push_back(TorusPoint());
  for (const auto& j : out.terms) out.walls.push_back(j.gamma);
  return out;
}

Setup make_setup(const AlphaSpec& alpha, const TorusPoint& x0, const Layout& lay, unsigned W,
                 std::uint64_t span) {
  Setup s;
  s.W = W;
  unsigned alpha_bits = W + 2;
  if (const auto* lit = std::get_if<PrecisionLiteral>(&alpha.variant())) {
    if (lit->bits < 2) fail(ErrorCode::kPrecisionExhausted, "literal precision too small");
    if (alpha_bits > lit->bits - 1) {
      alpha_bits = lit->bits - 1;
      s.refinable = false;
    }
  }
  const Enclosure e = enclose(alpha, alpha_bits);
  s.alpha_hat = scaled_floor(e.lo, W);
  const Rational width_units = e.width() * Rational(pow2(W));
  const Integer err_alpha = floor(width_units) + 2;
  s.x0_hat = scaled_floor(x0.exact(), W);
  for (const auto& t : lay.terms) s.term_points.push_back(scaled_floor(t.gamma.exact(), W));
  for (const auto& w : lay.walls) s.walls.push_back(scaled_floor(w.exact(), W));
  s.tol = 3 + from_u64(span) * err_alpha;
  if (s.tol >= pow2(W - 60)) {
    fail(ErrorCode::kPrecisionExhausted,
         "alpha is known to 2^-" + std::to_string(alpha_bits) + ", not enough for " +
             std::to_string(span) + " orbit steps");
  }
  return s;
}

template <class Body>
auto dispatch(unsigned W, Body&& body) {
  switch (W / 64) {
    case 2: return body(std::integral_constant<std::size_t, 2>{});
    case 4: return body(std::integral_constant<std::size_t, 4>{});
    case 8: return body(std::integral_constant<std::size_t, 8>{});
    case 16: return body(std::integral_constant<std::size_t, 16>{});
    case 32: return body(std::integral_constant<std::size_t, 32>{});
    case 64: return body(std::integral_constant<std::size_t, 64>{});
    default: fail(ErrorCode::kPrecisionExhausted, "unsupported width " + std::to_string(W));
  }
}

std::vector<Term> kernel_terms(const Layout& lay, const Setup& s) {
  std::vector<Term> out;
  for (std::size_t i = 0; i < lay.terms.size(); ++i) {
    const Integer top = s.term_points[i] >> (s.W - 128);
    Term t;
    t.H = lay.terms[i].H;
    const std::uint64_t hi = to_u64(top >> 64);
    const std::uint64_t lo = to_u64(top - (Integer(top >> 64) << 64));
    t.gamma128 = (static_cast<u128>(hi) << 64) | lo;
    out.push_back(t);
  }
  return out;
}

// Chunk boundaries of [from, to).
std::size_t chunk_count(std::uint64_t from, std::uint64_t to) {
  return static_cast<std::size_t>((to - from + kChunk - 1) / kChunk);
}

// Runs `work(setup, kernel, terms)` at the smallest admissible width,
// doubling it on collisions under the raise policy.
template <class Work>
auto with_width(const Summand& fn, const AlphaSpec& alpha, const TorusPoint& x0,
                std::uint64_t span, const SumOptions& options, unsigned& used, Work&& work) {
  const Layout lay = layout(fn);
  unsigned W = working_bits(span, options.bits == 0 ? default_bits() : options.bits);
  for (;;) {
    const Setup s = make_setup(alpha, x0, lay, W, span);
    const std::vector<Term> terms = kernel_terms(lay, s);
    try {
      used = W;
      return dispatch(W, [&](auto limbs) {
        constexpr std::size_t L = decltype(limbs)::value;
        const Kernel<L> kernel(s, fn);
        return work(kernel, terms);
      });
    } catch (const Collision& c) {
      if (!s.refinable || W >= kMaxBits) {
        throw JumpCollisionError(c.index, W,
                                 "orbit point " + std::to_string(c.index) +
                                     " cannot be separated from a discontinuity at " +
                                     std::to_string(W) + " bits");
      }
      W *= 2;
    }
  }
}

// Runs chunks in parallel, reporting the collision with the smallest index
// so the outcome does not depend on scheduling.
template <class Task>
void run_chunks(std::size_t count, unsigned workers, Task&& task) {
  std::vector<std::optional<std::uint64_t>> hits(count);
  parallel_for(count, workers, [&](std::size_t c) {
    try {
      task(c);
    } catch (const Collision& col) {
      hits[c] = col.index;
    }
  });
  for (const auto& h : hits) {
    if (h) throw Collision{*h};
  }
}

}  // namespace

Summand::Summand(const NormalForm& h) : total_jump(h.total_jump), terms(h.indicator_terms) {}

Summand::Summand(const JumpFunction& f)
    : total_jump(f.total_jump()), terms(f.jumps), smooth(f.smooth) {}

double Summand::evaluate(const TorusPoint& x) const {
  double out = total_jump * (x.value() - 0.5);
  for (const auto& j : terms) {
    out += j.H * ((x.exact() < j.gamma.exact() ? 1.0 : 0.0) - j.gamma.value());
  }
  if (!smooth.empty()) {
    double r = 0.0;
    const double u = x.value();
    for (auto it = smooth.rbegin(); it != smooth.rend(); ++it) r = r * u + *it;
    out += r;
  }
  return out;
}

double Summand::variation() const {
  if (terms.empty() && smooth.empty()) return std::fabs(total_jump);
  return total_variation(JumpFunction{terms, smooth});
}

unsigned default_bits() {
  if (const char* env = std::getenv("LAB_DEFAULT_BITS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v >= 64 && v <= kMaxBits) return static_cast<unsigned>(v);
  }
  return 256;
}

unsigned working_bits(std::uint64_t span, unsigned bits) {
  unsigned log2 = 0;
  while (log2 < 64 && (std::uint64_t{1} << log2) <= span) ++log2;
  const unsigned need = std::max(bits, 72u + log2);
  unsigned W = 128;
  while (W < need) W *= 2;
  if (W > kMaxBits) {
    fail(ErrorCode::kPrecisionExhausted, "requested " + std::to_string(need) + " working bits");
  }
  return W;
}

BirkhoffEngine::BirkhoffEngine(Summand fn, AlphaSpec alpha, SumOptions options)
    : fn_(std::move(fn)), alpha_(std::move(alpha)), options_(options) {}

double BirkhoffEngine::sum(const TorusPoint& x0, std::uint64_t N) const {
  return sum_range(x0, 0, N);
}

double BirkhoffEngine::sum_range(const TorusPoint& x0, std::uint64_t start,
                                 std::uint64_t count) const {
  if (count == 0) return 0.0;
  if (start > std::numeric_limits<std::uint64_t>::max() / 2 - count) {
    fail(ErrorCode::kSizeLimit, "orbit index range too large");
  }
  // The starting point is exact; evaluate it without fixed-point rounding.
  long double head = 0.0L;
  std::uint64_t from = start;
  if (start == 0) {
    head = fn_.evaluate(x0);
    from = 1;
  }
  const std::uint64_t to = start + count;
  if (from >= to) return static_cast<double>(head);
  const bool check = options_.policy == CollisionPolicy::kRaise;
  const long double body =
      with_width(fn_, alpha_, x0, to, options_, last_bits_, [&](const auto& kernel, const auto& terms) {
        const std::size_t chunks = chunk_count(from, to);
        std::vector<Acc> accs(chunks);
        run_chunks(chunks, options_.workers, [&](std::size_t c) {
          const std::uint64_t a = from + c * kChunk;
          const std::uint64_t b = std::min(to, a + kChunk);
          kernel.run(a, b, accs[c], check, [](std::uint64_t, const Acc&) {});
        });
        Acc total;
        for (const auto& a : accs) total.merge(a);
        return Valuer(fn_, terms)(total);
      });
  return static_cast<double>(head + body);
}

std::vector<double> BirkhoffEngine::sums_at(const TorusPoint& x0,
                                            const std::vector<std::uint64_t>& Ns) const {
  if (!std::is_sorted(Ns.begin(), Ns.end())) {
    fail(ErrorCode::kInvalidInput, "sums_at needs ascending N");
  }
  std::vector<double> out(Ns.size(), 0.0);
  if (Ns.empty() || Ns.back() == 0) return out;
  const std::uint64_t to = Ns.back();
  if (to > std::numeric_limits<std::uint64_t>::max() / 2) {
    fail(ErrorCode::kSizeLimit, "orbit index range too large");
  }
  const long double head = fn_.evaluate(x0);
  const bool check = options_.policy == CollisionPolicy::kRaise;
  with_width(fn_, alpha_, x0, to, options_, last_bits_, [&](const auto& kernel, const auto& terms) {
    const Valuer value(fn_, terms);
    const std::uint64_t from = 1;
    const std::size_t chunks = to > from ? chunk_count(from, to) : 0;
    std::vector<Acc> accs(chunks);
    run_chunks(chunks, options_.workers, [&](std::size_t c) {
      const std::uint64_t a = from + c * kChunk;
      const std::uint64_t b = std::min(to, a + kChunk);
      kernel.run(a, b, accs[c], check, [](std::uint64_t, const Acc&) {});
    });
    Acc running;
    std::size_t done = 0;  // chunks merged into running
    for (std::size_t i = 0; i < Ns.size(); ++i) {
      const std::uint64_t N = Ns[i];
      if (N == 0) continue;
      const std::uint64_t last = N;  // exclusive end of kernel indices
      while (done < chunks && from + (done + 1) * kChunk <= last) running.merge(accs[done++]);
      Acc partial = running;
      const std::uint64_t a = from + done * kChunk;
      if (a < last) {
        Acc tail;
        kernel.run(a, last, tail, false, [](std::uint64_t, const Acc&) {});
        partial.merge(tail);
      }
      out[i] = static_cast<double>(head + value(partial));
    }
    return 0;
  });
  return out;
}

std::vector<double> BirkhoffEngine::prefix_sums(const TorusPoint& x0, std::uint64_t M) const {
  std::vector<double> out(M, 0.0);
  if (M == 0) return out;
  if (M > std::numeric_limits<std::uint64_t>::max() / 2) {
    fail(ErrorCode::kSizeLimit, "orbit index range too large");
  }
  const long double head = fn_.evaluate(x0);
  out[0] = static_cast<double>(head);
  if (M == 1) return out;
  const bool check = options_.policy == CollisionPolicy::kRaise;
  with_width(fn_, alpha_, x0, M, options_, last_bits_, [&](const auto& kernel, const auto& terms) {
    const Valuer value(fn_, terms);
    const std::uint64_t from = 1;
    const std::size_t chunks = chunk_count(from, M);
    std::vector<Acc> accs(chunks);
    run_chunks(chunks, options_.workers, [&](std::size_t c) {
      const std::uint64_t a = from + c * kChunk;
      const std::uint64_t b = std::min(M, a + kChunk);
      kernel.run(a, b, accs[c], check, [](std::uint64_t, const Acc&) {});
    });
    std::vector<Acc> offsets(chunks);
    for (std::size_t c = 1; c < chunks; ++c) {
      offsets[c] = offsets[c - 1];
      offsets[c].merge(accs[c - 1]);
    }
    parallel_for(chunks, options_.workers, [&](std::size_t c) {
      const std::uint64_t a = from + c * kChunk;
      const std::uint64_t b = std::min(M, a + kChunk);
      Acc local;
      kernel.run(a, b, local, false, [&](std::uint64_t j, const Acc& acc) {
        out[j] = static_cast<double>(head + value(offsets[c], acc));
      });
    });
    return 0;
  });
  return out;
}

std::vector<double> BirkhoffEngine::orbit(const TorusPoint& x0, std::uint64_t first,
                                          std::uint64_t count) const {
  if (count == 0) return {};
  const std::uint64_t span = first + count;
  const Layout lay;
  const unsigned W = working_bits(span, options_.bits == 0 ? default_bits() : options_.bits);
  const Setup s = make_setup(alpha_, x0, lay, W, span);
  last_bits_ = W;
  return dispatch(W, [&](auto limbs) {
    constexpr std::size_t L = decltype(limbs)::value;
    const Kernel<L> kernel(s, fn_);
    return kernel.orbit(first, count);
  });
}

double birkhoff_sum(const Summand& fn, const AlphaSpec& alpha, const TorusPoint& x0,
                    std::uint64_t N, const SumOptions& options) {
  return BirkhoffEngine(fn, alpha, options).sum(x0, N);
}

namespace {

std::uint64_t denominator(const AlphaSpec& alpha, std::size_t n) {
  const auto table = convergents(alpha, n, 64);
  return to_u64(table[n].q);
}

}  // namespace

double block_increment(const Summand& fn, const AlphaSpec& alpha, const TorusPoint& x0,
                       std::uint64_t u, std::size_t n, const SumOptions& options) {
  const std::uint64_t q = denominator(alpha, n);
  if (u != 0 && q > std::numeric_limits<std::uint64_t>::max() / 4 / u) {
    fail(ErrorCode::kSizeLimit, "block start u q_n does not fit in 64 bits");
  }
  return BirkhoffEngine(fn, alpha, options).sum_range(x0, u * q, q);
}

BlockDecomposition decompose(std::uint64_t N, std::size_t n, std::uint64_t q_n) {
  if (q_n == 0) fail(ErrorCode::kInvalidInput, "q_n must be positive");
  return BlockDecomposition{n, N / q_n, N % q_n};
}

DenjoyKoksmaResult denjoy_koksma_check(const Summand& fn, const AlphaSpec& alpha,
                                       const TorusPoint& x0, std::size_t n,
                                       const SumOptions& options) {
  if (n < 1) fail(ErrorCode::kInvalidInput, "Denjoy-Koksma check needs n >= 1");
  DenjoyKoksmaResult r;
  r.n = n;
  r.q_n = denominator(alpha, n);
  r.abs_sum = std::fabs(birkhoff_sum(fn, alpha, x0, r.q_n, options));
  r.variation = fn.variation();
  r.pass = r.abs_sum <= r.variation + 1e-12 * (1.0 + r.variation);
  return r;
}

std::vector<DenjoyKoksmaResult> denjoy_koksma_suite(const Summand& fn, const AlphaSpec& alpha,
                                                    const TorusPoint& x0, std::size_t n_max,
                                                    const SumOptions& options) {
  if (n_max < 1) fail(ErrorCode::kInvalidInput, "Denjoy-Koksma suite needs n_max >= 1");
  const auto table = convergents(alpha, n_max, 64);
  std::vector<std::uint64_t> qs;
  for (std::size_t n = 1; n <= n_max; ++n) qs.push_back(to_u64(table[n].q));
  const auto sums = BirkhoffEngine(fn, alpha, options).sums_at(x0, qs);
  const double var = fn.variation();
  std::vector<DenjoyKoksmaResult> out;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    DenjoyKoksmaResult r;
    r.n = i + 1;
    r.q_n = qs[i];
    r.abs_sum = std::fabs(sums[i]);
    r.variation = var;
    r.pass = r.abs_sum <= var + 1e-12 * (1.0 + var);
    out.push_back(r);
  }
  return out;
}

PartialQuotientBound partial_quotient_bound_check(const Summand& fn, const AlphaSpec& alpha,
                                                  const TorusPoint& x0, std::uint64_t N,
                                                  const SumOptions& options) {
  PartialQuotientBound r;
  r.N = N;
  if (N == 0) {
    r.pass = true;
    return r;
  }
  const Integer target = from_u64(N);
  std::size_t K = 8;
  std::vector<Convergent> table = convergents(alpha, K, 64);
  while (table.back().q <= target) {
    K *= 2;
    table = convergents(alpha, K, 64);
  }
  r.k = locate_convergent(table, target);
  double digit_sum = 0.0;
  for (std::size_t i = 1; i <= r.k; ++i) digit_sum += static_cast<double>(table[i].a);
  const double var = fn.variation();
  r.abs_sum = std::fabs(birkhoff_sum(fn, alpha, x0, N, options));
  r.bound = kPartialQuotientConstant * var * digit_sum;
  r.pass = r.abs_sum <= r.bound + 1e-12 * (1.0 + r.bound);
  return r;
}

Discrepancy star_discrepancy(std::span<const double> points) {
  if (points.empty()) fail(ErrorCode::kInvalidInput, "star discrepancy needs N >= 1");
  std::vector<double> x(points.begin(), points.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double k = static_cast<double>(i);
    d = std::max({d, (k + 1.0) / n - x[i], x[i] - k / n});
  }
  return Discrepancy{d, 2.0 * d};
}

Discrepancy star_discrepancy(const AlphaSpec& alpha, const TorusPoint& x0, std::uint64_t N,
                             const SumOptions& options) {
  if (N == 0) fail(ErrorCode::kInvalidInput, "star discrepancy needs N >= 1");
  if (N > kDiscrepancyLimit) {
    fail(ErrorCode::kSizeLimit, "exact star discrepancy limited to N <= 10^6");
  }
  const auto pts = BirkhoffEngine(Summand(), alpha, options).orbit(x0, 1, N);
  return star_discrepancy(pts);
}

}  // namespace rotlab
