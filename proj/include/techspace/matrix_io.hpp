#pragma once

#include <string>
#include <string_view>

#include "techspace/measures.hpp"

namespace techspace {

/// `class_i,class_j,score` with a header row; every unordered pair once, in
/// lexicographic order; scores in shortest round-trip form.
std::string write_matrix_csv(const ProximityMatrix& matrix);

/// Inverse of write_matrix_csv. The vocabulary is recovered from the pairs,
/// so a single-class matrix cannot be represented. Throws InputError on
/// malformed or incomplete input.
ProximityMatrix read_matrix_csv(std::string_view text, MeasureId id, double epsilon);

}  // namespace techspace
