#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "techspace/corpus.hpp"
#include "techspace/types.hpp"

namespace techspace {

/// Sparse non-negative count vector. Keys are strictly increasing and no
/// stored count is zero, so the key list doubles as the support set.
struct SparseFeature {
  std::vector<std::uint32_t> keys;
  std::vector<std::uint32_t> counts;

  std::size_t support_size() const { return keys.size(); }
  bool empty() const { return keys.empty(); }

  /// Builds a feature from an unsorted multiset of keys (each occurrence adds one).
  static SparseFeature from_occurrences(std::vector<std::uint32_t> keys);
  /// Builds a feature from (key, count) pairs in any order; zero counts are dropped
  /// and repeated keys summed.
  static SparseFeature from_pairs(std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs);
};

/// Per-class features for one data choice.
struct FeatureSet {
  DataChoice data = DataChoice::RefPat;
  /// Size of the feature space: patents (+ external ids for RefPat) or classes.
  std::size_t dimension = 0;
  std::vector<SparseFeature> per_class;
};

/// Builds one feature vector per vocabulary class.
///
///  RefPat   counts[r] = patents of the class citing reference token r
///  RefClass counts[c] = references from the class to in-corpus patents of class c
///  CoPat    counts[p] = 1 if patent p carries the class
///  CoClass  counts[c] = patents carrying both the class and c (c != class)
///
/// Classes run in parallel; the result does not depend on the worker count.
FeatureSet build_features(const Corpus& corpus, DataChoice data, int workers = 0);

}  // namespace techspace
