#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "rotlab/alpha.hpp"
#include "rotlab/rational.hpp"

namespace rotlab {

// One row of the continued-fraction table. delta_k = (-1)^k (q_k alpha - p_k)
// is carried as a certified rational interval.
struct Convergent {
  std::size_t k = 0;
  Digit a = 0;  // a_k, 0 for the k = 0 row
  Integer p;
  Integer q;
  Rational delta_lo;
  Rational delta_hi;

  double delta() const;
};

// Rows k = 0..K from the recursion p_{k+1} = a_{k+1} p_k + p_{k-1} (same for
// q) with p_0 = 0, p_1 = 1, q_0 = 1, q_1 = a_1. delta_k is enclosed using
// only the given digits (the cylinder they define), so rows near K carry
// wide intervals; use the AlphaSpec overload for tight ones.
std::vector<Convergent> convergents(const std::vector<Digit>& digits, std::size_t K);

// Rows k = 0..K with delta_k enclosed to about 2^-bits.
std::vector<Convergent> convergents(const AlphaSpec& alpha, std::size_t K, unsigned bits = 256);

struct DeltaBoundCheck {
  double lower_slack = 0.0;  // delta_k - 1/((a_{k+1}+2) q_k)
  double upper_slack = 0.0;  // 1/(a_{k+1} q_k) - delta_k
  bool pass = false;
};

// Checks 1/((a_{k+1}+2) q_k) <= delta_k <= 1/(a_{k+1} q_k) on the whole
// certified interval of delta_k. Requires k >= 1.
DeltaBoundCheck check_delta_bounds(const Convergent& conv, Digit a_next);

// Smallest k >= 1 with N < q_k, so that q_{k-1} <= N < q_k.
// Returns 0 for N = 0.
std::size_t locate_convergent(const std::vector<Convergent>& table, const Integer& N);

enum class Parity { kEven, kOdd };

struct Congruence {
  std::uint64_t residue = 0;
  std::uint64_t modulus = 1;
};

// Targets for an explicitly constructed alpha: at each target index k the
// quotient a_{k+1} is forced large, and q_k optionally steered into a
// residue class.
struct IndexPlan {
  std::vector<std::size_t> target_indices;
  std::map<std::size_t, Digit> forced_quotients;  // keyed by k + 1
  std::optional<Congruence> congruence;
  double theta = 1e-2;
  Parity parity = Parity::kEven;
  std::size_t search_radius = 6;

  void validate() const;
};

struct TargetReport {
  std::size_t k = 0;
  double ratio = 0.0;  // sum_{i<=k} a_i / a_{k+1}
  std::uint64_t q_mod = 0;
  std::vector<std::size_t> adjusted_positions;
  std::size_t radius_used = 0;
};

struct ConstructedAlpha {
  AlphaSpec alpha;
  std::vector<Digit> digits;  // a_1 .. a_{last target + 1}
  std::vector<TargetReport> targets;
};

// Filler digits are 1; near each target, digits in {1,2,3} are searched
// exhaustively (fewest changes first) until q_k hits the congruence class.
// ConstructionFailed when no assignment within the radius works or the
// ratio bound cannot hold.
ConstructedAlpha construct_alpha(const IndexPlan& plan);

using QPredicate = std::function<bool(const Integer&)>;

QPredicate congruent_to(std::uint64_t residue, std::uint64_t modulus);
QPredicate accept_all();

// Indices k (2 <= k <= K, matching parity, a_{k+1} available) with q_k
// accepted and sum_{i<=k} a_i <= theta * a_{k+1}.
std::vector<std::size_t> find_good_indices(const std::vector<Digit>& digits, std::size_t K,
                                           const QPredicate& accept, double theta,
                                           Parity parity = Parity::kEven);

}  // namespace rotlab
