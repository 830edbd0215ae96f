#pragma once

#include <span>
#include <vector>

#include "pcgbench/ordering.hpp"
#include "pcgbench/sparse_matrix.hpp"

namespace pcgbench {

/// Per-iteration work of PCG: 2 inner products + 3 vector updates (5n),
/// one matvec (nnz) and one preconditioner application.
constexpr Count iteration_work(Count n, Count nnz, Count apply_cost)
{
    return 5 * n + nnz + apply_cost;
}

/// (5n + nnz + apply_cost) * iters + apply_cost: the extra application starts the method.
constexpr Count total_work(Count n, Count nnz, Count apply_cost, Count iters)
{
    return iteration_work(n, nnz, apply_cost) * iters + apply_cost;
}

/// Stored entries per column of a lower-triangular factor (diagonal included).
std::vector<Count> column_counts(const SparseMatrix& lower);

/// sum_i c_i^2
Count generation_cost(std::span<const Count> counts);

/// Exact symbolic Cholesky of a symmetric pattern by column-pattern merging
/// along the elimination tree. No numerics; cancellation is ignored.
struct SymbolicFactor {
    std::vector<Index> parent;  ///< elimination tree, -1 at roots
    std::vector<Count> counts;  ///< column counts of L, diagonal included
    Count nnz = 0;
};

SymbolicFactor symbolic_cholesky(const SparseMatrix& a);

/// nnz(L) + sum c_i^2 for the exact Cholesky factor of P A P^T.
Count direct_cost_baseline(const SparseMatrix& a, const Permutation& p);
Count direct_cost_baseline(const SparseMatrix& a);

}  // namespace pcgbench
