#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "techspace/corpus.hpp"
#include "techspace/features.hpp"
#include "techspace/types.hpp"

namespace techspace {

inline constexpr double kDefaultEpsilon = 1e-9;

/// |support(a) ∩ support(b)| / |support(a) ∪ support(b)|, 0 when both are empty.
double jaccard(const SparseFeature& a, const SparseFeature& b);

/// Cosine of the count vectors, 0 if either is all-zero.
double cosine(const SparseFeature& a, const SparseFeature& b);

/// Sample correlation of the two count vectors padded with zeros to
/// `dimension` entries. Zero-variance vectors score 0. Throws InputError if
/// `dimension` is smaller than the union of the supports.
double pearson(const SparseFeature& a, const SparseFeature& b, std::size_t dimension);

/// Symmetrized relative entropy between the count distributions. Both
/// vectors are restricted to the union of their supports, `epsilon` is added
/// to every cell, and each is renormalized before
///   D = [sum p log(p/q) + sum q log(q/p)] / 2   (natural log).
/// Throws ComputationError when both vectors are empty.
double relative_entropy(const SparseFeature& a, const SparseFeature& b,
                        double epsilon = kDefaultEpsilon);

/// Symmetric class-by-class score matrix, always oriented so that a higher
/// score means closer. Entropy matrices store -D. Diagonal entries hold NaN
/// and are never read.
class ProximityMatrix {
 public:
  ProximityMatrix() = default;
  ProximityMatrix(std::vector<std::string> classes, MeasureId id,
                  double epsilon = kDefaultEpsilon);

  std::size_t size() const { return classes_.size(); }
  std::span<const std::string> classes() const { return classes_; }
  const MeasureId& id() const { return id_; }
  double epsilon() const { return epsilon_; }
  static constexpr bool higher_is_closer() { return true; }

  double score(std::size_t i, std::size_t j) const { return scores_[i * size() + j]; }
  /// Row i, including the NaN diagonal cell.
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(scores_).subspan(i * size(), size());
  }
  void set(std::size_t i, std::size_t j, double value) {
    scores_[i * size() + j] = value;
    scores_[j * size() + i] = value;
  }

  /// Copy with every off-diagonal score mapped through `fn`.
  ProximityMatrix transformed(const std::function<double(double)>& fn) const;

  /// Off-diagonal bitwise equality (also requires equal ids and vocabularies).
  bool same_scores(const ProximityMatrix& other) const;

 private:
  std::vector<std::string> classes_;
  MeasureId id_;
  double epsilon_ = kDefaultEpsilon;
  std::vector<double> scores_;
};

struct ProximityOptions {
  double epsilon = kDefaultEpsilon;
  int workers = 0;  // 0 = OpenMP default
};

/// Scores every unordered class pair of the corpus for one measure. Output is
/// bitwise identical for any worker count.
ProximityMatrix build_proximity_matrix(const Corpus& corpus, MeasureId id,
                                       const ProximityOptions& options = {});

/// Same, from prebuilt features (reuse them across the four measures).
ProximityMatrix build_proximity_matrix(const FeatureSet& features,
                                       std::span<const std::string> vocabulary,
                                       MeasureKind measure, const ProximityOptions& options = {});

/// Edge weight for export and backbone extraction: the score itself, or
/// 1/(1+D) for entropy matrices so that weights are positive.
double export_weight(const ProximityMatrix& matrix, std::size_t i, std::size_t j);

}  // namespace techspace
