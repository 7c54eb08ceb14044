#pragma once

// Shared per-pair arithmetic. Both the serial reference and the OpenMP
// kernels finish every score through these functions, so they agree bitwise.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "techspace/features.hpp"

namespace techspace::detail {

struct Totals {
  std::uint64_t support = 0;
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;
};

inline Totals totals(const SparseFeature& f) {
  Totals t;
  t.support = f.keys.size();
  for (std::uint32_t c : f.counts) {
    t.sum += c;
    t.sum_sq += static_cast<std::uint64_t>(c) * c;
  }
  return t;
}

struct Overlap {
  std::uint64_t common = 0;
  std::uint64_t dot = 0;
};

inline Overlap overlap(const SparseFeature& a, const SparseFeature& b) {
  Overlap o;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.keys.size() && j < b.keys.size()) {
    if (a.keys[i] < b.keys[j]) {
      ++i;
    } else if (b.keys[j] < a.keys[i]) {
      ++j;
    } else {
      ++o.common;
      o.dot += static_cast<std::uint64_t>(a.counts[i]) * b.counts[j];
      ++i;
      ++j;
    }
  }
  return o;
}

inline double finish_jaccard(std::uint64_t common, std::uint64_t support_a,
                             std::uint64_t support_b) {
  const std::uint64_t uni = support_a + support_b - common;
  if (uni == 0) return 0.0;
  return static_cast<double>(common) / static_cast<double>(uni);
}

inline double finish_cosine(std::uint64_t dot, std::uint64_t sum_sq_a, std::uint64_t sum_sq_b) {
  if (sum_sq_a == 0 || sum_sq_b == 0) return 0.0;
  const double r = static_cast<double>(dot) /
                   std::sqrt(static_cast<double>(sum_sq_a) * static_cast<double>(sum_sq_b));
  return std::min(r, 1.0);
}

inline double finish_pearson(std::uint64_t dimension, std::uint64_t dot, const Totals& a,
                             const Totals& b) {
  using i128 = __int128;
  const i128 n = dimension;
  const i128 var_a = n * static_cast<i128>(a.sum_sq) - static_cast<i128>(a.sum) * a.sum;
  const i128 var_b = n * static_cast<i128>(b.sum_sq) - static_cast<i128>(b.sum) * b.sum;
  if (var_a <= 0 || var_b <= 0) return 0.0;
  const i128 cov = n * static_cast<i128>(dot) - static_cast<i128>(a.sum) * b.sum;
  const double r = static_cast<double>(cov) /
                   std::sqrt(static_cast<double>(var_a) * static_cast<double>(var_b));
  return std::clamp(r, -1.0, 1.0);
}

inline double smoothed_log(std::uint32_t count, double epsilon) {
  return std::log(static_cast<double>(count) + epsilon);
}

/// Symmetrized relative entropy over the union support. `log_a(i)` must return
/// smoothed_log(a.counts[i], epsilon); callers either compute it inline or
/// serve it from a cache. Returns NaN when both vectors are empty.
template <class LogA, class LogB>
double entropy_merge(const SparseFeature& a, const SparseFeature& b, std::uint64_t sum_a,
                     std::uint64_t sum_b, double epsilon, LogA&& log_a, LogB&& log_b) {
  const std::uint64_t common = overlap(a, b).common;
  const std::uint64_t uni = a.keys.size() + b.keys.size() - common;
  if (uni == 0) return std::numeric_limits<double>::quiet_NaN();

  const double z_a = static_cast<double>(sum_a) + epsilon * static_cast<double>(uni);
  const double z_b = static_cast<double>(sum_b) + epsilon * static_cast<double>(uni);
  const double log_z_a = std::log(z_a);
  const double log_z_b = std::log(z_b);
  const double log_eps = std::log(epsilon);

  double forward = 0.0;
  double backward = 0.0;
  const auto accumulate = [&](double count_a, double log_count_a, double count_b,
                              double log_count_b) {
    const double p = (count_a + epsilon) / z_a;
    const double q = (count_b + epsilon) / z_b;
    const double log_p = log_count_a - log_z_a;
    const double log_q = log_count_b - log_z_b;
    forward += p * (log_p - log_q);
    backward += q * (log_q - log_p);
  };

  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.keys.size() || j < b.keys.size()) {
    if (j == b.keys.size() || (i < a.keys.size() && a.keys[i] < b.keys[j])) {
      accumulate(a.counts[i], log_a(i), 0.0, log_eps);
      ++i;
    } else if (i == a.keys.size() || b.keys[j] < a.keys[i]) {
      accumulate(0.0, log_eps, b.counts[j], log_b(j));
      ++j;
    } else {
      accumulate(a.counts[i], log_a(i), b.counts[j], log_b(j));
      ++i;
      ++j;
    }
  }
  return std::max(0.0, 0.5 * (forward + backward));
}

}  // namespace techspace::detail
