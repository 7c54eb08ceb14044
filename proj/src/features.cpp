#include "techspace/features.hpp"

#include <algorithm>

#include <omp.h>

namespace techspace {

SparseFeature SparseFeature::from_occurrences(std::vector<std::uint32_t> keys) {
  std::sort(keys.begin(), keys.end());
  SparseFeature f;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    f.keys.push_back(keys[i]);
    f.counts.push_back(static_cast<std::uint32_t>(j - i));
    i = j;
  }
  return f;
}

SparseFeature SparseFeature::from_pairs(std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  SparseFeature f;
  for (const auto& [key, count] : pairs) {
    if (count == 0) continue;
    if (!f.keys.empty() && f.keys.back() == key) {
      f.counts.back() += count;
    } else {
      f.keys.push_back(key);
      f.counts.push_back(count);
    }
  }
  return f;
}

FeatureSet build_features(const Corpus& corpus, DataChoice data, int workers) {
  const std::size_t num_classes = corpus.num_classes();
  const std::size_t num_patents = corpus.num_patents();

  // Patents per class, in patent order.
  std::vector<std::vector<PatentIndex>> members(num_classes);
  for (PatentIndex p = 0; p < num_patents; ++p) {
    for (ClassIndex c : corpus.classes(p)) members[c].push_back(p);
  }

  FeatureSet out;
  out.data = data;
  switch (data) {
    case DataChoice::RefPat: out.dimension = corpus.num_ref_keys(); break;
    case DataChoice::CoPat: out.dimension = num_patents; break;
    case DataChoice::RefClass:
    case DataChoice::CoClass: out.dimension = num_classes; break;
  }
  out.per_class.resize(num_classes);

  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(num_classes); ++ci) {
    const auto cls = static_cast<ClassIndex>(ci);
    std::vector<std::uint32_t> occurrences;
    for (PatentIndex p : members[cls]) {
      switch (data) {
        case DataChoice::RefPat:
          for (RefKey r : corpus.references(p)) occurrences.push_back(r);
          break;
        case DataChoice::RefClass:
          for (RefKey r : corpus.references(p)) {
            if (!corpus.is_internal_ref(r)) continue;
            for (ClassIndex c : corpus.classes(r)) occurrences.push_back(c);
          }
          break;
        case DataChoice::CoPat:
          occurrences.push_back(p);
          break;
        case DataChoice::CoClass:
          for (ClassIndex c : corpus.classes(p)) {
            if (c != cls) occurrences.push_back(c);
          }
          break;
      }
    }
    out.per_class[cls] = SparseFeature::from_occurrences(std::move(occurrences));
  }
  return out;
}

}  // namespace techspace
