#pragma once

// Pairwise scoring kernels. The serial version scores each pair by merging
// the two sparse vectors and is kept as the reference; the OpenMP version
// accumulates overlaps row by row through an inverted index. Both produce
// bitwise identical matrices.

#include "techspace/features.hpp"
#include "techspace/measures.hpp"

namespace techspace::kernels {

void score_pairs_serial(const FeatureSet& features, MeasureKind measure, double epsilon,
                        ProximityMatrix& out);

void score_pairs_parallel(const FeatureSet& features, MeasureKind measure, double epsilon,
                          ProximityMatrix& out, int workers = 0);

}  // namespace techspace::kernels
