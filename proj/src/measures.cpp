#include "techspace/measures.hpp"

#include <cstring>

#include "pair_formulas.hpp"
#include "techspace/errors.hpp"
#include "techspace/kernels.hpp"

namespace techspace {

double jaccard(const SparseFeature& a, const SparseFeature& b) {
  return detail::finish_jaccard(detail::overlap(a, b).common, a.support_size(), b.support_size());
}

double cosine(const SparseFeature& a, const SparseFeature& b) {
  return detail::finish_cosine(detail::overlap(a, b).dot, detail::totals(a).sum_sq,
                               detail::totals(b).sum_sq);
}

double pearson(const SparseFeature& a, const SparseFeature& b, std::size_t dimension) {
  const auto o = detail::overlap(a, b);
  const std::size_t uni = a.support_size() + b.support_size() - o.common;
  if (dimension < uni) {
    throw InputError("pearson: dimension " + std::to_string(dimension) +
                     " is smaller than the union support " + std::to_string(uni));
  }
  return detail::finish_pearson(dimension, o.dot, detail::totals(a), detail::totals(b));
}

double relative_entropy(const SparseFeature& a, const SparseFeature& b, double epsilon) {
  if (!(epsilon > 0.0)) throw InputError("relative_entropy: epsilon must be positive");
  const double d = detail::entropy_merge(
      a, b, detail::totals(a).sum, detail::totals(b).sum, epsilon,
      [&](std::size_t i) { return detail::smoothed_log(a.counts[i], epsilon); },
      [&](std::size_t j) { return detail::smoothed_log(b.counts[j], epsilon); });
  if (std::isnan(d)) throw ComputationError("relative_entropy: both vectors are empty");
  return d;
}

ProximityMatrix::ProximityMatrix(std::vector<std::string> classes, MeasureId id, double epsilon)
    : classes_(std::move(classes)),
      id_(id),
      epsilon_(epsilon),
      scores_(classes_.size() * classes_.size(), 0.0) {
  for (std::size_t i = 0; i < size(); ++i) {
    scores_[i * size() + i] = std::numeric_limits<double>::quiet_NaN();
  }
}

ProximityMatrix ProximityMatrix::transformed(const std::function<double(double)>& fn) const {
  ProximityMatrix out = *this;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = i + 1; j < size(); ++j) out.set(i, j, fn(score(i, j)));
  }
  return out;
}

bool ProximityMatrix::same_scores(const ProximityMatrix& other) const {
  if (classes_ != other.classes_ || id_ != other.id_) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) {
      if (i == j) continue;
      const double a = score(i, j);
      const double b = other.score(i, j);
      if (std::memcmp(&a, &b, sizeof(double)) != 0) return false;
    }
  }
  return true;
}

ProximityMatrix build_proximity_matrix(const FeatureSet& features,
                                       std::span<const std::string> vocabulary,
                                       MeasureKind measure, const ProximityOptions& options) {
  if (!(options.epsilon > 0.0)) throw InputError("epsilon must be positive");
  ProximityMatrix m(std::vector<std::string>(vocabulary.begin(), vocabulary.end()),
                    MeasureId{features.data, measure}, options.epsilon);
  kernels::score_pairs_parallel(features, measure, options.epsilon, m, options.workers);
  return m;
}

ProximityMatrix build_proximity_matrix(const Corpus& corpus, MeasureId id,
                                       const ProximityOptions& options) {
  const FeatureSet features = build_features(corpus, id.data, options.workers);
  return build_proximity_matrix(features, corpus.vocabulary(), id.measure, options);
}

double export_weight(const ProximityMatrix& matrix, std::size_t i, std::size_t j) {
  const double s = matrix.score(i, j);
  if (matrix.id().measure == MeasureKind::Entropy) return 1.0 / (1.0 - s);
  return s;
}

}  // namespace techspace
