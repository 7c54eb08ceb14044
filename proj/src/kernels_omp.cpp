#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <omp.h>

#include "pair_formulas.hpp"
#include "techspace/kernels.hpp"

namespace techspace::kernels {
namespace {

// Key -> (class, count) postings, classes ascending within each key.
struct InvertedIndex {
  std::vector<std::uint64_t> offsets;
  std::vector<std::uint32_t> classes;
  std::vector<std::uint32_t> counts;
};

InvertedIndex invert(const FeatureSet& features) {
  InvertedIndex idx;
  idx.offsets.assign(features.dimension + 1, 0);
  for (const auto& f : features.per_class) {
    for (std::uint32_t k : f.keys) ++idx.offsets[k + 1];
  }
  for (std::size_t k = 0; k < features.dimension; ++k) idx.offsets[k + 1] += idx.offsets[k];
  idx.classes.resize(idx.offsets.back());
  idx.counts.resize(idx.offsets.back());
  std::vector<std::uint64_t> cursor(idx.offsets.begin(), idx.offsets.end() - 1);
  for (std::uint32_t c = 0; c < features.per_class.size(); ++c) {
    const auto& f = features.per_class[c];
    for (std::size_t t = 0; t < f.keys.size(); ++t) {
      const auto pos = cursor[f.keys[t]]++;
      idx.classes[pos] = c;
      idx.counts[pos] = f.counts[t];
    }
  }
  return idx;
}

void score_overlap_measures(const FeatureSet& features, MeasureKind measure,
                            ProximityMatrix& out, int threads) {
  const auto& f = features.per_class;
  const std::size_t n = f.size();
  const InvertedIndex idx = invert(features);
  std::vector<detail::Totals> totals(n);
  for (std::size_t c = 0; c < n; ++c) totals[c] = detail::totals(f[c]);

#pragma omp parallel num_threads(threads)
  {
    // Integer accumulators: the result is independent of visiting order.
    std::vector<std::uint64_t> common(n, 0);
    std::vector<std::uint64_t> dot(n, 0);
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(n); ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      for (std::size_t t = 0; t < f[i].keys.size(); ++t) {
        const std::uint32_t key = f[i].keys[t];
        const std::uint64_t a = f[i].counts[t];
        const auto begin = idx.classes.begin() + static_cast<std::ptrdiff_t>(idx.offsets[key]);
        const auto end = idx.classes.begin() + static_cast<std::ptrdiff_t>(idx.offsets[key + 1]);
        for (auto it = std::upper_bound(begin, end, static_cast<std::uint32_t>(i)); it != end;
             ++it) {
          const auto pos = static_cast<std::size_t>(it - idx.classes.begin());
          ++common[*it];
          dot[*it] += a * idx.counts[pos];
        }
      }
      for (std::size_t j = i + 1; j < n; ++j) {
        double s = 0.0;
        switch (measure) {
          case MeasureKind::Jaccard:
            s = detail::finish_jaccard(common[j], totals[i].support, totals[j].support);
            break;
          case MeasureKind::Cosine:
            s = detail::finish_cosine(dot[j], totals[i].sum_sq, totals[j].sum_sq);
            break;
          case MeasureKind::Pearson:
            s = detail::finish_pearson(features.dimension, dot[j], totals[i], totals[j]);
            break;
          case MeasureKind::Entropy: break;
        }
        out.set(i, j, s);
        common[j] = 0;
        dot[j] = 0;
      }
    }
  }
}

void score_entropy(const FeatureSet& features, double epsilon, ProximityMatrix& out,
                   int threads) {
  const auto& f = features.per_class;
  const std::size_t n = f.size();
  std::vector<std::vector<double>> logs(n);
  std::vector<std::uint64_t> sums(n);
  for (std::size_t c = 0; c < n; ++c) {
    sums[c] = detail::totals(f[c]).sum;
    logs[c].reserve(f[c].counts.size());
    for (std::uint32_t count : f[c].counts) logs[c].push_back(detail::smoothed_log(count, epsilon));
  }

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(n); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = detail::entropy_merge(
          f[i], f[j], sums[i], sums[j], epsilon, [&](std::size_t t) { return logs[i][t]; },
          [&](std::size_t t) { return logs[j][t]; });
      out.set(i, j, std::isnan(d) ? -std::numeric_limits<double>::infinity() : 0.0 - d);
    }
  }
}

}  // namespace

void score_pairs_parallel(const FeatureSet& features, MeasureKind measure, double epsilon,
                          ProximityMatrix& out, int workers) {
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  if (measure == MeasureKind::Entropy) {
    score_entropy(features, epsilon, out, threads);
  } else {
    score_overlap_measures(features, measure, out, threads);
  }
}

}  // namespace techspace::kernels
