#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rotlab/alpha.hpp"
#include "rotlab/convergents.hpp"
#include "rotlab/torus.hpp"

namespace rotlab {

// The function being summed: jump data in normal form plus an optional
// smooth polynomial remainder in {x}.
struct Summand {
  double total_jump = 0.0;
  std::vector<Jump> terms;
  std::vector<double> smooth;

  Summand() = default;  // the zero function
  Summand(const NormalForm& h);
  Summand(const JumpFunction& f);

  double evaluate(const TorusPoint& x) const;
  double variation() const;
};

enum class CollisionPolicy {
  kRaise,   // raise precision, then JumpCollision
  kAccept,  // keep whichever side the working precision lands on
};

struct SumOptions {
  unsigned bits = 0;  // minimum working bits; 0 reads LAB_DEFAULT_BITS, else 256
  unsigned workers = 0;
  CollisionPolicy policy = CollisionPolicy::kRaise;
};

unsigned default_bits();

// Working width in bits for orbit indices below `span`: a multiple of 64
// that is a power of two times 64, at least max(bits, 72 + log2(span + 1)).
unsigned working_bits(std::uint64_t span, unsigned bits);

// Sums of f along the orbit x0 + k alpha. The orbit is carried in W-bit
// fixed point, so every chunk start x0 + k0 alpha is bit-identical to
// stepping and results do not depend on the worker count.
class BirkhoffEngine {
 public:
  BirkhoffEngine(Summand fn, AlphaSpec alpha, SumOptions options = {});

  // S_N(f, alpha, x0) = sum_{k=0}^{N-1} f(x0 + k alpha).
  double sum(const TorusPoint& x0, std::uint64_t N) const;

  // S_count(f, alpha, x0 + start alpha).
  double sum_range(const TorusPoint& x0, std::uint64_t start, std::uint64_t count) const;

  // S_N for every N in `Ns` (ascending) from one sweep.
  std::vector<double> sums_at(const TorusPoint& x0, const std::vector<std::uint64_t>& Ns) const;

  // S_1, ..., S_M.
  std::vector<double> prefix_sums(const TorusPoint& x0, std::uint64_t M) const;

  // Orbit points iota(x0 + n alpha) for n = first .. first + count - 1.
  std::vector<double> orbit(const TorusPoint& x0, std::uint64_t first, std::uint64_t count) const;

  // Width used by the most recent call.
  unsigned last_bits() const noexcept { return last_bits_; }

  const Summand& summand() const noexcept { return fn_; }
  const AlphaSpec& alpha() const noexcept { return alpha_; }

 private:
  Summand fn_;
  AlphaSpec alpha_;
  SumOptions options_;
  mutable unsigned last_bits_ = 0;
};

double birkhoff_sum(const Summand& fn, const AlphaSpec& alpha, const TorusPoint& x0,
                    std::uint64_t N, const SumOptions& options = {});

// S_{q_n}(f, alpha, x0 + u q_n alpha).
double block_increment(const Summand& fn, const AlphaSpec& alpha, const TorusPoint& x0,
                       std::uint64_t u, std::size_t n, const SumOptions& options = {});

// N = b q_n + rem with 0 <= rem < q_n.
struct BlockDecomposition {
  std::size_t n = 0;
  std::uint64_t b = 0;
  std::uint64_t rem = 0;
};

BlockDecomposition decompose(std::uint64_t N, std::size_t n, std::uint64_t q_n);

struct DenjoyKoksmaResult {
  std::size_t n = 0;
  std::uint64_t q_n = 0;
  double abs_sum = 0.0;
  double variation = 0.0;
  bool pass = false;
};

// |S_{q_n}| <= Var(f).
DenjoyKoksmaResult denjoy_koksma_check(const Summand& fn, const AlphaSpec& alpha,
                                       const TorusPoint& x0, std::size_t n,
                                       const SumOptions& options = {});

// The same check for n = 1..n_max from a single sweep.
std::vector<DenjoyKoksmaResult> denjoy_koksma_suite(const Summand& fn, const AlphaSpec& alpha,
                                                    const TorusPoint& x0, std::size_t n_max,
                                                    const SumOptions& options = {});

struct PartialQuotientBound {
  std::uint64_t N = 0;
  std::size_t k = 0;  // q_{k-1} <= N < q_k
  double abs_sum = 0.0;
  double bound = 0.0;  // 2 Var(f) sum_{i<=k} a_i
  bool pass = false;
};

inline constexpr double kPartialQuotientConstant = 2.0;

PartialQuotientBound partial_quotient_bound_check(const Summand& fn, const AlphaSpec& alpha,
                                                  const TorusPoint& x0, std::uint64_t N,
                                                  const SumOptions& options = {});

inline constexpr std::uint64_t kDiscrepancyLimit = 1'000'000;

struct Discrepancy {
  double star = 0.0;
  double interval_bound = 0.0;  // 2 D*
};

// Star discrepancy of points in [0,1) by the sorted extremal formula.
Discrepancy star_discrepancy(std::span<const double> points);

// Star discrepancy of iota(x0 + n alpha), n = 1..N. SizeLimit above 10^6.
Discrepancy star_discrepancy(const AlphaSpec& alpha, const TorusPoint& x0, std::uint64_t N,
                             const SumOptions& options = {});

}  // namespace rotlab
