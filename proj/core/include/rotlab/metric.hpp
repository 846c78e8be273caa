#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rotlab/alpha.hpp"

namespace rotlab {

inline constexpr unsigned kMetricSampleBits = 1024;

// pi^2 / (12 log 2), the Khintchine-Levy growth rate of log q_k.
double levy_constant();

struct MetricSample {
  std::vector<Digit> digits;  // a_1 .. a_K, certified on m/2^1024 +- 2^-1024
  double log_q_over_k = 0.0;
  std::optional<double> trimmed_ratio;  // (sum a - max a) / (K log K / log 2), K >= 2
  std::uint32_t redraws = 0;            // draws rejected for too few certified digits
};

struct MetricStats {
  std::size_t sample_size = 0;
  std::size_t k_depth = 0;
  double mean_log_q_over_k = 0.0;
  std::optional<double> mean_trimmed_ratio;
  std::uint64_t resampled = 0;
  std::vector<MetricSample> samples;
};

// Per-sample seed of the splittable scheme: independent of worker count.
std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index);

// One uniform alpha = m / 2^1024 drawn from the given per-sample seed,
// redrawn until k_depth digits are certified.
MetricSample metric_sample(std::uint64_t per_sample_seed, std::size_t k_depth);

MetricStats metric_stats(std::size_t sample_size, std::size_t k_depth, std::uint64_t seed,
                         unsigned workers = 0);

}  // namespace rotlab
