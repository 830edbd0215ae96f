#pragma once

#include <cstdint>

#include "pcgbench/sparse_matrix.hpp"

namespace pcgbench {

/// k^2 x k^2 five-point stencil on a k x k grid, row-major numbering:
/// 4 on the diagonal, -1 to each grid neighbor.
SparseMatrix poisson2d(Index k);

/// n x n constant tridiagonal matrix.
SparseMatrix tridiag(Index n, double diag = 2.0, double off = -1.0);

/// Symmetric strictly diagonally dominant matrix with positive diagonal.
/// Each pair i < j is coupled with probability `density`; couplings are
/// uniform in [-1, 1] (either sign), and a_ii = sum_j |a_ij| + u_i with
/// u_i uniform in [0.1, 1.1). Deterministic in (n, density, seed).
SparseMatrix random_sdd(Index n, double density, std::uint64_t seed);

}  // namespace pcgbench
