#include "rotlab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "rotlab/error.hpp"
#include "rotlab/parallel.hpp"

namespace rotlab {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::size_t kMaxRedraws = 64;

}  // namespace

double levy_constant() { return std::numbers::pi * std::numbers::pi / (12.0 * std::log(2.0)); }

std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

MetricSample metric_sample(std::uint64_t per_sample_seed, std::size_t k_depth) {
  if (k_depth == 0) fail(ErrorCode::kInvalidInput, "k_depth must be >= 1");
  std::mt19937_64 rng(per_sample_seed);
  const Integer scale = pow2(kMetricSampleBits);
  MetricSample out;
  for (std::size_t attempt = 0; attempt < kMaxRedraws; ++attempt) {
    std::uint64_t words[kMetricSampleBits / 64];
    for (auto& w : words) w = rng();
    Integer m;
    mpz_import(m.get_mpz_t(), kMetricSampleBits / 64, -1, sizeof(std::uint64_t), 0, 0, words);
    if (m <= 1 || m + 1 >= scale) {
      ++out.redraws;
      continue;
    }
    Rational lo(m - 1, scale);
    Rational hi(m + 1, scale);
    lo.canonicalize();
    hi.canonicalize();
    auto digits = common_digits(lo, hi, k_depth);
    if (digits.size() < k_depth) {
      ++out.redraws;
      continue;
    }
    Integer q_prev = 0, q = 1;
    for (Digit a : digits) {
      Integer next = from_u64(a) * q + q_prev;
      q_prev = q;
      q = next;
    }
    out.log_q_over_k = log_integer(q) / static_cast<double>(k_depth);
    if (k_depth >= 2) {
      double sum = 0, mx = 0;
      for (Digit a : digits) {
        sum += static_cast<double>(a);
        mx = std::max(mx, static_cast<double>(a));
      }
      const double K = static_cast<double>(k_depth);
      out.trimmed_ratio = (sum - mx) / (K * std::log(K) / std::log(2.0));
    }
    out.digits = std::move(digits);
    return out;
  }
  fail(ErrorCode::kPrecisionExhausted,
       "no draw certified " + std::to_string(k_depth) + " digits at 1024 bits");
}

MetricStats metric_stats(std::size_t sample_size, std::size_t k_depth, std::uint64_t seed,
                         unsigned workers) {
  if (sample_size == 0) fail(ErrorCode::kInvalidInput, "sample_size must be >= 1");
  MetricStats out;
  out.sample_size = sample_size;
  out.k_depth = k_depth;
  out.samples.resize(sample_size);
  parallel_for(sample_size, workers, [&](std::size_t i) {
    out.samples[i] = metric_sample(sample_seed(seed, i), k_depth);
  });
  double log_sum = 0, trim_sum = 0;
  for (const auto& s : out.samples) {
    log_sum += s.log_q_over_k;
    if (s.trimmed_ratio) trim_sum += *s.trimmed_ratio;
    out.resampled += s.redraws;
  }
  const double n = static_cast<double>(sample_size);
  out.mean_log_q_over_k = log_sum / n;
  if (k_depth >= 2) out.mean_trimmed_ratio = trim_sum / n;
  return out;
}

}  // namespace rotlab
