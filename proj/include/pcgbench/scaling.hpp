#pragma once

#include "pcgbench/sparse_matrix.hpp"

namespace pcgbench {

/// Unit-diagonal, bit-symmetric system obtained by symmetric Jacobi scaling.
struct ScaledSystem {
    SparseMatrix matrix;
    Vector scale;  ///< sqrt of the original diagonal, all > 0
    Vector original_diag;
};

/// A' = D^{-1/2} A D^{-1/2}, A'' = (A' + A'^T) / 2 with diag(A'') := 1.
/// Throws NotSpdCandidate on a missing or nonpositive diagonal entry.
ScaledSystem scale_and_symmetrize(const SparseMatrix& a);

}  // namespace pcgbench
