#include <limits>

#include "techspace/errors.hpp"
#include "techspace/kernels.hpp"

namespace techspace::kernels {

void score_pairs_serial(const FeatureSet& features, MeasureKind measure, double epsilon,
                        ProximityMatrix& out) {
  const auto& f = features.per_class;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      double s = 0.0;
      switch (measure) {
        case MeasureKind::Jaccard: s = jaccard(f[i], f[j]); break;
        case MeasureKind::Cosine: s = cosine(f[i], f[j]); break;
        case MeasureKind::Pearson: s = pearson(f[i], f[j], features.dimension); break;
        case MeasureKind::Entropy:
          try {
            s = 0.0 - relative_entropy(f[i], f[j], epsilon);
          } catch (const ComputationError&) {
            s = -std::numeric_limits<double>::infinity();
          }
          break;
      }
      out.set(i, j, s);
    }
  }
}

}  // namespace techspace::kernels
