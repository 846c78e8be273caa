#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rotlab/birkhoff.hpp"
#include "rotlab/convergents.hpp"
#include "rotlab/laws.hpp"
#include "rotlab/limit_law.hpp"

namespace rotlab {

class EmpiricalCDF {
 public:
  EmpiricalCDF() = default;
  explicit EmpiricalCDF(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }

  double cdf(double x) const;       // #{v <= x} / M
  double cdf_left(double x) const;  // #{v < x} / M
  double quantile(double p) const;  // inf { x : F(x) >= p }
  double median() const { return quantile(0.5); }
  double iqr() const { return quantile(0.75) - quantile(0.25); }

  // (v - median) / IQR for every value.
  EmpiricalCDF standardized() const;
  EmpiricalCDF affine(double scale, double shift) const;

  static EmpiricalCDF merge(const EmpiricalCDF& a, const EmpiricalCDF& b);

 private:
  std::vector<double> values_;
};

enum class NormalizationRule {
  kExplicit,
  kPaperTilde,          // A = 0, B = M / q_{n(M)} with q_{n(M)} <= M < q_{n(M)+1}
  kPaperTildeAnchored,  // A = 0, B = M / q_{n_l} for the subsequence index n_l
};

struct Normalization {
  NormalizationRule rule = NormalizationRule::kExplicit;
  double A = 0.0;
  double B = 1.0;
  std::size_t n = 0;  // convergent index used by the tilde rules

  static Normalization explicit_values(double A, double B);
  static Normalization paper_tilde(const std::vector<Convergent>& table, std::uint64_t M);
  static Normalization paper_tilde_anchored(const std::vector<Convergent>& table, std::size_t n,
                                            std::uint64_t M);
};

std::string to_string(NormalizationRule rule);
NormalizationRule parse_normalization_rule(const std::string& text);

// ECDF of (S_N - A) / B for N = 1..M from one prefix-sum sweep.
EmpiricalCDF temporal_ecdf(const Summand& fn, const AlphaSpec& alpha, const TorusPoint& x0,
                           std::uint64_t M, const Normalization& norm,
                           const SumOptions& options = {});

struct SubsequenceM {
  std::uint64_t M = 0;
  std::uint64_t blocks = 0;  // floor(c a_{n+1})
  Digit a_next = 0;
  std::uint64_t q_n = 0;
};

// M = floor(c a_{n+1}) q_n + q_n - 1.
SubsequenceM subsequence_M(const Rational& c, Digit a_next, std::uint64_t q_n);
SubsequenceM subsequence_M(double c, std::size_t n, const AlphaSpec& alpha);

double ks_distance(const EmpiricalCDF& F, const EmpiricalCDF& G);
double ks_distance(const EmpiricalCDF& F, const Law& G);
double ks_distance(const Law& F, const EmpiricalCDF& G);
double ks_distance(const Law& F, const Law& G);

struct IsolatedResult {
  double delta = 0.0;
  std::uint64_t N_max = 0;
  std::vector<std::uint64_t> members;
  double density = 0.0;        // |members| / N_max
  double lower_density = 0.0;  // min over N in [N_max/2, N_max] of |members <= N| / N
  bool empty = false;
  std::uint64_t rational_modulus = 1;  // lcm of the denominators of rational betas
  double congruence_density = 0.0;     // share of N = 1 mod b that are members
  double proof_bound = 0.0;            // (1/b)(1 - 2 nu_irr delta)
};

// N <= N_max with min_j ||N beta_j|| > delta. A beta with denominator
// <= N_max is handled exactly through residues; others in 128-bit fixed
// point. delta defaults to 1/(4 nu).
IsolatedResult isolated_multipliers(const std::vector<TorusPoint>& betas,
                                    std::optional<double> delta, std::uint64_t N_max);

struct EmpiricalSetup {
  JumpFunction f;
  AlphaSpec alpha;
  TorusPoint x0;
  std::size_t n = 0;  // subsequence index n_l
  SumOptions options;
};

struct RefutationReport {
  double c1 = 0.0;
  double c2 = 0.0;
  double eps = 0.0;
  double delta = 0.0;
  bool automatic = false;  // (eps, delta) chosen from the shape of g
  double ks_standardized = 0.0;
  std::optional<double> ks_empirical_c1;
  std::optional<double> ks_empirical_c2;
  std::string verdict;  // "distinct" or "same"
};

inline constexpr double kDistinctThreshold = 0.01;

// Compares the laws of g(U_c1) and g(U_c2) after median/IQR
// standardization. Without c1, c2 the pair (eps, delta) is chosen so that
// g rises on [0, eps], falls on [eps, delta], and 0 <= g(delta) < g(eps)
// (after a sign flip if g starts downwards). With `empirical`, each law of
// g(U_c)/c is also compared with the temporal ECDF at M_l(c).
RefutationReport tdlt_refutation(const LimitLawParams& params, std::optional<double> c1,
                                 std::optional<double> c2,
                                 const std::optional<EmpiricalSetup>& empirical = std::nullopt);

struct CriticalPair {
  double eps = 0.0;
  double delta = 0.0;
  bool flipped = false;
};

CriticalPair critical_pair(const PiecewiseQuadratic& g);

}  // namespace rotlab
