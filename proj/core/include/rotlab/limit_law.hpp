#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "rotlab/alpha.hpp"
#include "rotlab/birkhoff.hpp"
#include "rotlab/torus.hpp"

namespace rotlab {

enum class BarMode { kExact, kClustered };

// Limits of iota(q_n x0) and iota(q_n gamma_i) along a subsequence of n.
struct BarLimits {
  TorusPoint x0_bar;
  std::vector<TorusPoint> gamma_bars;
  std::vector<std::size_t> subsequence;
  BarMode certainty = BarMode::kExact;
  double radius = 0.0;      // largest distance of a member from the limit
  double separation = 0.0;  // min_i ||gamma_bar_i - gamma_bar_1||, i >= 2
};

inline constexpr double kClusterRadius = 1e-3;
inline constexpr std::size_t kMinClusterIndices = 8;

// kExact: iota(q_n x) must be the same for every index (a residue class of
// q_n forces it). kClustered: the largest joint cluster of radius `radius`
// (at least max(3, count / 4) members) is taken as the subsequence.
// NoConvergence when neither works or gamma_bar_i = gamma_bar_1 for some i.
BarLimits bar_limits(const std::vector<Digit>& digits, const TorusPoint& x0,
                     const std::vector<TorusPoint>& gammas,
                     const std::vector<std::size_t>& indices, BarMode mode,
                     double radius = kClusterRadius);

// g is built from sum_i H_i, the jump heights H_i at the limit points
// gamma_bar_i, and x0_bar; U_c is uniform on [0, c].
struct LimitLawParams {
  std::vector<double> H;
  std::vector<double> gamma_bar;
  double x0_bar = 0.0;
  double c = 1.0;

  double total_jump() const;
  void validate() const;

  static LimitLawParams from_bars(const std::vector<Jump>& jumps, const BarLimits& bars,
                                  double c = 1.0);
};

// Continuous function on [0,1], A y^2 + B y + C on [breaks[i], breaks[i+1]].
struct PiecewiseQuadratic {
  std::vector<double> breaks;
  std::vector<std::array<double, 3>> coef;

  double operator()(double y) const;
  double derivative(double y) const;  // right derivative
  std::size_t piece(double y) const;
  std::size_t pieces() const { return coef.size(); }
  // Breakpoints where the derivative actually jumps.
  std::vector<double> kinks(double tol = 1e-12) const;
  double min_on(double lo, double hi) const;
  double max_on(double lo, double hi) const;
};

// g(x) = S (int_0^x iota(y + x0_bar) dy - x/2)
//      + sum_i H_i (int_0^x 1_[0,gamma_bar_i)(iota(y + x0_bar)) dy - x gamma_bar_i).
PiecewiseQuadratic g_closed_form(const LimitLawParams& params);

// P[g(U_c) <= x].
double g_pushforward_cdf(const LimitLawParams& params, double x);

struct LadderRung {
  AlphaSpec alpha;
  std::size_t n = 0;  // even convergent index
};

struct ConvergenceRow {
  std::size_t n = 0;
  Digit a_next = 0;
  std::uint64_t q_n = 0;
  double sup_error = 0.0;
  double argmax_c = 0.0;
  double budget = 0.0;  // 2 Var sum_{i<=n} a_i / a_{n+1}
  std::vector<double> c;
  std::vector<double> normalized;  // S_{floor(c a) q_n} / a_{n+1}
  std::vector<double> target;      // g(c)
};

// One row per rung: sup over the c-grid (plus every breakpoint of g) of
// |S_{floor(c a_{n+1}) q_n}(f, alpha, x0) / a_{n+1} - g(c)|, with g built
// from the exact bar limits at q_n.
std::vector<ConvergenceRow> lemma_convergence_report(const JumpFunction& f,
                                                     const std::vector<LadderRung>& rungs,
                                                     const TorusPoint& x0,
                                                     const std::vector<double>& c_grid,
                                                     const SumOptions& options = {});

// 0, 0.01, ..., 1.
std::vector<double> default_c_grid(std::size_t points = 101);

}  // namespace rotlab
